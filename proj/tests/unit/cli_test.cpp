#include "qrc/cli/config.hpp"
#include "qrc/cli/runner.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qrc::cli {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("qrc_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

TEST(Units, Rates) {
    EXPECT_NEAR(parse_rate(Json("10 MHz"), "v"), kTwoPi * 10, 1e-12);
    EXPECT_NEAR(parse_rate(Json("10MHz"), "v"), kTwoPi * 10, 1e-12);
    EXPECT_NEAR(parse_rate(Json("250 kHz"), "v"), kTwoPi * 0.25, 1e-12);
    EXPECT_NEAR(parse_rate(Json("1.5 GHz"), "v"), kTwoPi * 1500, 1e-9);
    EXPECT_EQ(parse_rate(Json(3.5), "v"), 3.5);
    EXPECT_EQ(parse_rate(Json("3.5 rad/us"), "v"), 3.5);
}

TEST(Units, Times) {
    EXPECT_NEAR(parse_time(Json("500 ns"), "t"), 0.5, 1e-15);
    EXPECT_EQ(parse_time(Json("2 us"), "t"), 2.0);
    EXPECT_EQ(parse_time(Json("2 ms"), "t"), 2000.0);
    EXPECT_EQ(parse_time(Json(0.25), "t"), 0.25);
}

TEST(Units, MalformedValuesNameTheKey) {
    try {
        parse_rate(Json("fast MHz"), "decision.v");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("decision.v"), std::string::npos);
    }
    EXPECT_THROW(parse_rate(Json("10 furlongs"), "v"), ConfigError);
    EXPECT_THROW(parse_time(Json("1 MHz"), "t"), ConfigError);
    EXPECT_THROW(parse_time(Json(true), "t"), ConfigError);
}

TEST(Hash, Fnv1aReferenceVectors) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
    EXPECT_EQ(hex64(0xaf63dc4c8601ec8cULL), "af63dc4c8601ec8c");
}

TEST(ParseConfig, EmptyConfigGivesDefaults) {
    const RunConfig rc = parse_config(Json::object(), true);
    EXPECT_EQ(rc.seed, 0u);
    EXPECT_EQ(rc.decision.n_samples, DecisionConfig{}.n_samples);
    EXPECT_NEAR(rc.decision.omega, kTwoPi * 4.2, 1e-12);
    EXPECT_EQ(rc.multitask.mean_dt_grid.size(), 21u);
    EXPECT_TRUE(rc.warnings.empty());
}

TEST(ParseConfig, UnitsAndSections) {
    const Json doc = Json::parse(R"({
        "seed": 42,
        "common": {"omega": "2 MHz", "dt": "10 ns", "realizations": 3},
        "dissipation": {"gamma": "0.1 MHz"},
        "decision": {"v": "10 MHz", "input_values": ["0 MHz", "1.5 MHz"], "n_samples": 100},
        "working_memory": {"delay_grid": {"start": 0, "stop": "500 ns", "step": "250 ns"}},
        "longterm": {"references": ["AF", "grgggg"], "n_sites": 6}
    })");
    const RunConfig rc = parse_config(doc, true);
    EXPECT_EQ(rc.seed, 42u);
    EXPECT_EQ(rc.decision.seed, 42u);
    EXPECT_EQ(rc.longterm.seed, 42u);
    EXPECT_NEAR(rc.decision.omega, kTwoPi * 2, 1e-12);
    EXPECT_NEAR(rc.multitask.dt, 0.01, 1e-15);
    EXPECT_EQ(rc.working_memory.realizations, 3);
    EXPECT_NEAR(rc.decision.dissipation.gamma, kTwoPi * 0.1, 1e-12);
    EXPECT_NEAR(rc.decision.v, kTwoPi * 10, 1e-12);
    ASSERT_EQ(rc.decision.input_values.size(), 2u);
    EXPECT_NEAR(rc.decision.input_values[1], 1.5, 1e-12);
    EXPECT_EQ(rc.working_memory.delay_grid, (std::vector<double>{0.0, 0.25, 0.5}));
    EXPECT_EQ(rc.longterm.references[1], "grgggg");
}

TEST(ParseConfig, OverridesWin) {
    const Json doc = Json::parse(R"({"seed": 1, "threads": 2, "common": {"dt": 0.05}})");
    const RunConfig rc = parse_config(doc, true, Overrides{7, 3, 0.01});
    EXPECT_EQ(rc.seed, 7u);
    EXPECT_EQ(rc.multitask.threads, 3);
    EXPECT_EQ(rc.decision.dt, 0.01);
}

TEST(ParseConfig, StrictRejectsUnknownKeys) {
    const Json doc = Json::parse(R"({"decision": {"v": 1.0, "colour": "red"}, "extra": 1})");
    try {
        parse_config(doc, true);
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("decision.colour"), std::string::npos);
        EXPECT_NE(msg.find("extra"), std::string::npos);
    }
    const RunConfig rc = parse_config(doc, false);
    EXPECT_EQ(rc.warnings.size(), 2u);
}

TEST(ParseConfig, TypeAndInvariantErrors) {
    EXPECT_THROW(parse_config(Json::parse(R"({"decision": {"n_samples": "many"}})"), true), ConfigError);
    EXPECT_THROW(parse_config(Json::parse(R"({"seed": -1})"), true), ConfigError);
    EXPECT_THROW(parse_config(Json::parse(R"({"threads": 0})"), true), ConfigError);
    EXPECT_THROW(parse_config(Json::parse(R"({"common": {"dt": -0.1}})"), true), ConfigError);
    EXPECT_THROW(parse_config(Json::parse(R"({"multitask": {"n_inhibitory": 9}})"), true), ConfigError);
    EXPECT_THROW(parse_config(Json::parse(R"({"longterm": {"references": ["XY"]}})"), true), ConfigError);
    EXPECT_THROW(parse_config(Json::parse(R"({"decision": []})"), true), ConfigError);
    EXPECT_THROW(parse_config(Json::parse(R"([1, 2])"), true), ConfigError);
}

TEST(Csv, NumberFormatRoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) EXPECT_EQ(std::stod(format_number(x)), x);
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(NAN), "nan");
}

TEST(Csv, HeaderAndRows) {
    Table t{{"a", "b"}, {}};
    t.add({1.0, 0.5});
    t.add({-2.0, 1e-3});
    std::ostringstream s;
    write_csv(t, s);
    EXPECT_EQ(s.str(), "a,b\n1,0.5\n-2,0.001\n");
}

TEST(Run, XorWritesTableAndManifest) {
    const fs::path out = scratch("xor");
    RunManifest m;
    ASSERT_EQ(run(RunRequest{"xor", {}, out}, &m), kExitOk);
    const auto rows = lines(slurp(out / "xor.csv"));
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0], "s1,s2,p_plus,decision");
    const Json manifest = Json::parse(slurp(out / "manifest.json"));
    EXPECT_EQ(manifest["status"], "ok");
    EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 16u);
    EXPECT_EQ(manifest["files"].size(), m.files.size());
    for (const auto& f : manifest["files"]) EXPECT_TRUE(fs::exists(out / f.get<std::string>()));
}

TEST(Run, SameSeedGivesIdenticalBytes) {
    const fs::path cfg = scratch("det") / "c.json";
    std::ofstream(cfg) << R"({"longterm": {"n_sites": 6, "n_cycles": 10, "n_train": 10, "n_test": 6}})";
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    RunRequest r{"longterm-memory", cfg, a};
    r.overrides.seed = 9;
    RunManifest ma, mb;
    ASSERT_EQ(run(r, &ma), kExitOk);
    r.out_dir = b;
    r.overrides.threads = 2;
    ASSERT_EQ(run(r, &mb), kExitOk);
    EXPECT_EQ(slurp(a / "R_n.csv"), slurp(b / "R_n.csv"));
    // R(n) has one row per cycle from 0 to n_cycles, plus the header.
    EXPECT_EQ(lines(slurp(a / "R_n.csv")).size(), 12u);
    EXPECT_NE(ma.config_hash, mb.config_hash);  // the thread count is part of the config
    r.overrides.threads = 1;
    r.out_dir = b;
    RunManifest mc;
    ASSERT_EQ(run(r, &mc), kExitOk);
    EXPECT_EQ(ma.config_hash, mc.config_hash);
}

TEST(Run, FailuresStillWriteManifest) {
    const fs::path dir = scratch("fail");
    const fs::path cfg = dir / "bad.json";
    std::ofstream(cfg) << R"({"decision": {"v": "ten MHz"}})";
    RunManifest m;
    EXPECT_EQ(run(RunRequest{"decision", cfg, dir / "out"}, &m), kExitConfig);
    const Json manifest = Json::parse(slurp(dir / "out" / "manifest.json"));
    EXPECT_EQ(manifest["status"], "error");
    EXPECT_EQ(manifest["error"]["type"], "ConfigError");
    EXPECT_NE(manifest["error"]["message"].get<std::string>().find("decision.v"), std::string::npos);

    std::ofstream(cfg) << "{ not json";
    EXPECT_EQ(run(RunRequest{"xor", cfg, dir / "out2"}), kExitConfig);
    EXPECT_EQ(run(RunRequest{"nonsense", {}, dir / "out3"}), kExitConfig);
}

TEST(Run, VerifySuites) {
    const fs::path out = scratch("verify");
    RunRequest r{"verify", {}, out};
    r.suite = "core";
    RunManifest m;
    EXPECT_EQ(run(r, &m), kExitOk);
    EXPECT_EQ(m.metrics.at("checks_failed"), 0.0);
    EXPECT_GT(m.metrics.at("checks_passed"), 0.0);
    EXPECT_EQ(lines(slurp(out / "verify.csv"))[0], "suite,check,value,tolerance,pass");
    r.suite = "nope";
    EXPECT_EQ(run(r), kExitConfig);
}

TEST(Run, FidelityMatrixIsSquareWithBitstringHeader) {
    const fs::path dir = scratch("kernel");
    std::ofstream(dir / "c.json") << R"({"kernel": {"sizes": [4], "steady_sizes": [4]}})";
    ASSERT_EQ(run(RunRequest{"kernel-count", dir / "c.json", dir / "out"}), kExitOk);
    const auto rows = lines(slurp(dir / "out" / "steady_fidelity_4.csv"));
    ASSERT_EQ(rows.size(), 8u);  // header + 7 ring configurations
    std::stringstream header(rows[0]);
    int cols = 0;
    for (std::string label; std::getline(header, label, ','); ++cols) {
        EXPECT_EQ(label.size(), 4u);
        EXPECT_EQ(label.find_first_not_of("gr"), std::string::npos);
    }
    EXPECT_EQ(cols, 7);
}

TEST(Binary, ExitCodes) {
    const fs::path out = scratch("bin");
    const std::string exe = QRC_CLI_PATH;
    auto code = [](const std::string& cmd) {
        const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    EXPECT_EQ(code(exe + " run xor --out " + out.string()), 0);
    EXPECT_TRUE(fs::exists(out / "manifest.json"));
    EXPECT_EQ(code(exe + " run xor --config /nonexistent.json"), 2);
    EXPECT_EQ(code(exe + " run teleport"), 2);
    std::ofstream(out / "c.json") << R"({"xor": {"j_ratio": 100, "typo": 1}})";
    EXPECT_EQ(code(exe + " run xor --strict --config " + (out / "c.json").string() + " --out " + (out / "s").string()), 2);
    EXPECT_EQ(code(exe + " run xor --config " + (out / "c.json").string() + " --out " + (out / "s").string()), 0);
}

}  // namespace
}  // namespace qrc::cli
