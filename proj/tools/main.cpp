#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/commands.hpp"

namespace cli = gather3d::cli;

int main(int argc, char** argv) {
    CLI::App app{"Simulate and check gathering strategies for 3D robot swarms."};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    double dt = 0.0;
    bool quiet = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "Directory for output files");
        sub->add_flag("--quiet,-q", quiet, "Suppress stdout");
    };

    auto* run = app.add_subcommand("run", "Run one experiment");
    run->add_option("--config,-c", config_path, "Experiment config file")->required();
    auto* run_seed = run->add_option("--seed", seed, "Override the generator seed");
    auto* run_dt = run->add_option("--dt", dt, "Override the time step");
    add_common(run);

    auto* sweep = app.add_subcommand("sweep", "Run one experiment per size in [sweep] sizes");
    sweep->add_option("--config,-c", config_path, "Experiment config file")->required();
    auto* sweep_seed = sweep->add_option("--seed", seed, "Override the generator seed");
    auto* sweep_dt = sweep->add_option("--dt", dt, "Override the time step");
    add_common(sweep);

    std::string trace_path;
    std::vector<std::string> properties;
    auto* check = app.add_subcommand("check", "Replay property checkers over a stored trace");
    check->add_option("trace", trace_path, "Trace file (JSON lines)")->required();
    check->add_option("--property,-p", properties, "Property to check (repeatable)")
        ->check(CLI::IsMember(cli::check_names()));
    add_common(check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? cli::exit_code::ok : cli::exit_code::usage;
    }

    cli::Overrides ov;
    if (!out_dir.empty()) ov.out_dir = out_dir;
    ov.quiet = quiet;
    if (run_seed->count() || sweep_seed->count()) ov.seed = seed;
    if (run_dt->count() || sweep_dt->count()) ov.dt = dt;

    if (run->parsed()) return cli::cmd_run(config_path, ov, std::cout, std::cerr);
    if (sweep->parsed()) return cli::cmd_sweep(config_path, ov, std::cout, std::cerr);
    return cli::cmd_check(trace_path, properties, ov, std::cout, std::cerr);
}
