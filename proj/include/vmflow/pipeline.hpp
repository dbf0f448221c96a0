#pragma once

#include <string>

namespace vmflow {

// Parsed command-line surface shared by all subcommands. Zero sentinels mean
// "take the value from the config file"; omega needs an explicit flag since
// 0 is a meaningful frequency.
struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    int grid = 0;
    bool omega_set = false;
    double omega = 0.0;
    int k_lo = 10;
    int k_hi = 30;
    bool with_oracle = false;
    double tol = 0.0;
    int jobs = 1;
};

// Subcommand entry points. Exit codes: 0 success, 1 config/validation/IO
// problems, 2 solver failures (no convergence, branch loss, singular or
// ill-posed transforms), 3 wholesale oracle mismatch (no branch seed matched
// within 10% relative distance).
int cmd_baseflow(const CliOptions& opt);
int cmd_spectrum(const CliOptions& opt);
int cmd_margin(const CliOptions& opt);
int cmd_sweep(const CliOptions& opt);
int cmd_oracle(const CliOptions& opt);

}  // namespace vmflow
