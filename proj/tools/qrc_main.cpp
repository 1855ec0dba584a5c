// qrc run <subcommand> [--config PATH] [--seed U64] [--out DIR] [--threads N] [--dt F] [--strict]
#include "qrc/cli/runner.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace qrc::cli;
    CLI::App app{"Quantum reservoir experiments on Rydberg arrays"};
    app.require_subcommand(1);

    RunRequest req;
    std::uint64_t seed = 0;
    int threads = 1;
    double dt = 0.0;

    auto* run_cmd = app.add_subcommand("run", "Run one experiment and write CSVs plus manifest.json");
    run_cmd->add_option("command", req.command, "Experiment")->required()->check(CLI::IsMember(subcommands()));
    run_cmd->add_option("--config", req.config_path, "JSON config file")->check(CLI::ExistingFile);
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Root seed (overrides the config)");
    run_cmd->add_option("--out", req.out_dir, "Output directory")->capture_default_str();
    auto* threads_opt = run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    auto* dt_opt = run_cmd->add_option("--dt", dt, "Lindblad step in us")->check(CLI::PositiveNumber);
    run_cmd->add_flag("--strict", req.strict, "Reject unknown config keys");
    run_cmd->add_option("--suite", req.suite, "verify: suite to run")->capture_default_str();

    app.add_subcommand("list", "List experiments")->callback([] {
        for (const auto& s : subcommands()) std::cout << s << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    if (!run_cmd->parsed()) return kExitOk;

    if (*seed_opt) req.overrides.seed = seed;
    if (*threads_opt) req.overrides.threads = threads;
    if (*dt_opt) req.overrides.dt = dt;

    RunManifest m;
    const int code = run(req, &m);
    if (code == kExitOk) {
        std::cout << req.command << ": ok (" << m.wall_clock_s << " s), wrote " << m.files.size() << " files to "
                  << req.out_dir.string() << '\n';
        for (const auto& [k, v] : m.metrics) std::cout << "  " << k << " = " << format_number(v) << '\n';
    } else {
        std::cerr << req.command << ": " << m.error_type << ": " << m.error_message << '\n';
    }
    for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
    return code;
}
