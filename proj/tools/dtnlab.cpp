// dtnlab: half-line NLS Dirichlet-to-Neumann laboratory.
//
// Subcommands: run (simulate + CSV artifacts), verify (run + theorem-level
// report), sweep (cartesian parameter study), converge (manufactured-solution
// order check). Exit codes: 0 pass, 1 check failed, 2 usage/config error,
// 3 numerical failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dtn/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"half-line NLS boundary-trace laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int workers = 1;
    bool seed_free = false;

    app.add_option("--config", config_path, "configuration file")->required();
    app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
    app.add_option("--workers", workers, "parallel runs for sweep")->check(CLI::PositiveNumber);
    app.add_flag("--seed-free", seed_free,
                 "all computations are deterministic; flag reserved");

    auto* cmd_run = app.add_subcommand("run", "simulate and emit trace/norm/residual CSVs");
    auto* cmd_verify = app.add_subcommand("verify", "simulate and check the paper's estimates");
    auto* cmd_sweep = app.add_subcommand("sweep", "cartesian (alpha, omega, lambda, A) study");
    auto* cmd_converge = app.add_subcommand("converge", "manufactured-solution order study");

    CLI11_PARSE(app, argc, argv);

    try {
        const dtn::RunConfig config = dtn::parse_config_file(config_path);
        const std::string dir = out_dir.empty() ? config.output.dir : out_dir;
        if (cmd_run->parsed()) return dtn::commands::run_command(config, dir);
        if (cmd_verify->parsed()) return dtn::commands::verify_command(config, dir);
        if (cmd_sweep->parsed()) return dtn::commands::sweep_command(config, dir, workers);
        if (cmd_converge->parsed()) return dtn::commands::convergence_command(config, dir);
    } catch (const dtn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return dtn::commands::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return dtn::commands::kExitConfigError;
    }
    return dtn::commands::kExitConfigError;
}
