// Command-line driver: solve / verify / sweep subcommands around the
// exterior-disk steady-flow solver library.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "diskflow/config.hpp"
#include "diskflow/errors.hpp"

namespace {

int dispatch(const diskflow::RunConfig& cfg) {
    try {
        return diskflow::run(cfg);
    } catch (const diskflow::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const diskflow::DivergenceError& e) {
        std::fprintf(stderr, "divergence: %s\n", e.what());
        return 3;
    } catch (const diskflow::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 4;
    } catch (const diskflow::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int load_and_dispatch(const std::string& config_path, diskflow::RunConfig::Mode mode,
                      bool quick) {
    try {
        diskflow::RunConfig cfg = mode == diskflow::RunConfig::Mode::verify && config_path.empty()
                                      ? diskflow::RunConfig{}
                                      : diskflow::load_config(config_path, mode);
        cfg.mode = mode;
        cfg.quick_verify = quick;
        return dispatch(cfg);
    } catch (const diskflow::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral solver for steady planar flow outside the unit disk"};
    app.require_subcommand(1);

    std::string solve_config, sweep_config, verify_config;
    bool quick = false;

    CLI::App* solve = app.add_subcommand("solve", "Solve the steady flow for one configuration");
    solve->add_option("--config", solve_config, "Path to a key = value configuration file")
        ->required();

    CLI::App* verify = app.add_subcommand("verify", "Run the numerical verification suite");
    verify->add_flag("--quick", quick, "Reduced sweep sizes for a fast smoke run");

    CLI::App* sweep = app.add_subcommand("sweep", "Solve over a grid of parameter combinations");
    sweep->add_option("--config", sweep_config, "Path to a key = value configuration file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (solve->parsed()) {
        return load_and_dispatch(solve_config, diskflow::RunConfig::Mode::solve, false);
    }
    if (verify->parsed()) {
        return load_and_dispatch(verify_config, diskflow::RunConfig::Mode::verify, quick);
    }
    return load_and_dispatch(sweep_config, diskflow::RunConfig::Mode::sweep, false);
}
