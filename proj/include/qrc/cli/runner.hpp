#pragma once

#include "qrc/cli/config.hpp"
#include "qrc/tasks/result.hpp"

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace qrc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

const std::vector<std::string>& subcommands();

struct RunRequest {
    std::string command;
    std::filesystem::path config_path;  // empty: all defaults
    std::filesystem::path out_dir = ".";
    Overrides overrides;
    bool strict = false;
    std::string suite = "all";  // verify only
};

struct RunManifest {
    std::string command;
    std::string status = "ok";
    int exit_code = kExitOk;
    std::string config_hash;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string version;
    double wall_clock_s = 0.0;
    std::map<std::string, double> metrics;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
    std::string error_type;
    std::string error_message;

    Json to_json() const;
};

// Shortest round-trip decimal; "nan" / "inf" / "-inf" for non-finite.
std::string format_number(double x);
void write_csv(const Table& table, std::ostream& out);
// Per-sample rows: input_*, feature_*, output_*, target_*, test.
Table samples_table(const TaskResult& result);

struct VerifyCheck {
    std::string suite;
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

const std::vector<std::string>& verify_suites();
std::vector<VerifyCheck> run_verify(const std::string& suite);

// Runs one subcommand, writes CSVs and manifest.json into out_dir (also on
// failure) and returns the exit code.
int run(const RunRequest& request, RunManifest* manifest = nullptr);

}  // namespace qrc::cli
