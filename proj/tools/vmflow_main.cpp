#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "vmflow/output.hpp"
#include "vmflow/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Stability toolkit for heated viscoelastic MHD channel flow"};
    app.set_version_flag("--version", vmflow::kToolVersion);
    app.require_subcommand(1);

    vmflow::CliOptions opt;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "JSON parameter file")
            ->required();
        cmd->add_option("--grid", opt.grid, "node count override (odd, >= 65)");
        cmd->add_option("--omega", opt.omega, "streamwise frequency override");
        cmd->add_option("--k-lo", opt.k_lo, "lowest branch index");
        cmd->add_option("--k-hi", opt.k_hi, "highest branch index");
        cmd->add_flag("--with-oracle", opt.with_oracle,
                      "validate the branch against the direct eigensolver");
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--tol", opt.tol, "solver tolerance override");
        cmd->add_option("--jobs", opt.jobs, "worker threads");
        return cmd;
    };

    const std::vector<std::pair<CLI::App*, std::function<int(const vmflow::CliOptions&)>>>
        commands = {
            {add_common(app.add_subcommand("baseflow",
                                           "solve the stationary channel flow")),
             vmflow::cmd_baseflow},
            {add_common(app.add_subcommand(
                 "spectrum", "evaluate the asymptotic eigenvalue branch")),
             vmflow::cmd_spectrum},
            {add_common(app.add_subcommand("margin",
                                           "evaluate the stability margin forms")),
             vmflow::cmd_margin},
            {add_common(app.add_subcommand(
                 "sweep", "map the stability margin over a parameter axis")),
             vmflow::cmd_sweep},
            {add_common(app.add_subcommand(
                 "oracle", "hunt the spectrum with the direct eigensolver")),
             vmflow::cmd_oracle},
        };

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help / --version
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    for (const auto& [cmd, fn] : commands)
        if (cmd->parsed()) {
            opt.omega_set = cmd->count("--omega") > 0;
            return fn(opt);
        }
    std::cerr << "error: no subcommand selected\n";
    return 1;
}
