#pragma once

#include "qrc/tasks/tasks.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qrc::cli {

using Json = nlohmann::json;

// Rates: bare numbers are rad/us; "MHz", "kHz", "GHz" are cyclic and pick
// up 2 pi; "rad/us" is accepted explicitly. Times: bare numbers are us;
// "ns", "us", "ms". `key` names the field in error messages.
double parse_rate(const Json& v, const std::string& key);
double parse_time(const Json& v, const std::string& key);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Typed view of one JSON object that remembers which keys were read.
class Section {
  public:
    Section(const Json* node, std::string path, std::vector<std::string>* unknown);

    bool has(const std::string& key) const;
    double number(const std::string& key, double fallback);
    double rate(const std::string& key, double fallback);
    double time(const std::string& key, double fallback);
    int integer(const std::string& key, int fallback);
    std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback);
    bool boolean(const std::string& key, bool fallback);
    std::vector<double> numbers(const std::string& key, std::vector<double> fallback);
    std::vector<double> rates(const std::string& key, std::vector<double> fallback);
    // A list, or {"start", "stop", "step"}.
    std::vector<double> times(const std::string& key, std::vector<double> fallback);
    std::vector<int> integers(const std::string& key, std::vector<int> fallback);
    std::vector<std::string> strings(const std::string& key, std::vector<std::string> fallback);
    std::optional<cplx> complex(const std::string& key);
    Section section(const std::string& key);

    // Adds keys never read to the unknown list.
    void finish();

  private:
    const Json* get(const std::string& key);
    std::string where(const std::string& key) const;

    const Json* node_;
    std::string path_;
    std::vector<std::string>* unknown_;
    std::set<std::string> seen_;
};

struct XorSettings {
    double j_ratio = 100.0;
    double omega = 1.0;
    double t = -1.0;  // < 0: pi / omega
};

struct ZErrorSettings {
    double j_ratio = 100.0;
    double omega = 1.0;
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
};

// Every task's settings; a config file may fill any subset.
struct RunConfig {
    std::uint64_t seed = 0;
    int threads = 1;
    XorSettings xor_demo;
    ZErrorSettings zerror;
    MultitaskConfig multitask;
    DecisionConfig decision;
    WorkingMemoryConfig working_memory;
    LongtermConfig longterm;
    ScarFidelityConfig scars;
    EmbeddabilityConfig embeddability;
    KernelCountConfig kernel;
    std::vector<std::string> warnings;  // unknown keys in non-strict mode
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<double> dt;
};

// Builds the run configuration. Unknown keys throw ConfigError in strict
// mode and become warnings otherwise. Overrides win over the file.
RunConfig parse_config(const Json& doc, bool strict, const Overrides& overrides = {});
Json read_json_file(const std::filesystem::path& path);

}  // namespace qrc::cli
