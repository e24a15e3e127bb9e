#pragma once
// Configuration parsing and run orchestration for the command-line tool.
//
// Config format: flat `key = value` lines, one per line; `#` starts a
// comment; blank lines are skipped; nesting is spelled with dotted keys.
// Unknown and duplicate keys are rejected. Keys:
//
//   alpha, gamma, rho             (required)
//   n_max, r_max, m_nodes, quad_tol, picard_tol, picard_max_iter, delta, c0
//   forcing.type   zero | power_law | file        (default zero)
//   forcing.n      mode index of the power law    (default 1)
//   forcing.amplitude                              (default 0)
//   forcing.exponent   decay rate mu of r^{-mu}    (default 4)
//   forcing.path   CSV produced by the mode writer (forcing.type = file)
//   output.dir     artifact directory              (default "out")
//   sweep.alpha, sweep.gamma, sweep.rho   comma-separated lists (sweep mode)
//   sweep.forcing_n                        comma-separated integer list
//
// All remaining defaults are the SolverParams defaults.

#include <iosfwd>
#include <string>
#include <vector>

#include "diskflow/fields.hpp"

namespace diskflow {

struct ForcingSpec {
    enum class Type { zero, power_law, file };
    Type type = Type::zero;
    int n = 1;               // power_law mode index
    double amplitude = 0.0;  // power_law amplitude
    double exponent = 4.0;   // power_law decay rate
    std::string path;        // file source
};

struct RunConfig {
    enum class Mode { solve, verify, sweep };
    Mode mode = Mode::solve;
    PhysParams phys;
    SolverParams solver;
    ForcingSpec forcing;
    std::string output_dir = "out";
    std::vector<double> sweep_alpha, sweep_gamma, sweep_rho;
    std::vector<int> sweep_forcing_n;
    bool quick_verify = false;
};

// Parses and fully validates a config document. `mode` selects the
// validation profile: rho = 3 is accepted for verify but rejected for
// solve/sweep, matching the solver's admissible range.
RunConfig parse_config(const std::string& text, RunConfig::Mode mode);
RunConfig load_config(const std::string& path, RunConfig::Mode mode);

// The forcing expansion described by the config, realized on `grid`.
// power_law with n != 0 fills the conjugate mode pair so the field is real;
// file forcing reads a mode CSV (its grid must match) and mirrors it the
// same way.
FieldExpansion build_forcing(const RunConfig& cfg, const RadialGrid& grid);

// One sweep-table row; read_sweep_csv re-parses what run() emits.
struct SweepRow {
    double alpha = 0.0, gamma = 0.0, rho = 0.0;
    int forcing_n = 0;
    std::string status;  // ok | not_converged | invalid | failed
    int iterations = 0;
    double final_ratio = 0.0;
    double velocity_slope = 0.0, vorticity_slope = 0.0;
    double final_norm = 0.0;
};
std::vector<SweepRow> read_sweep_csv(std::istream& is);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

// Parsed numeric content of a convergence log emitted by run().
struct ConvergenceRecord {
    std::vector<double> norm_history, diff_history, contraction_ratios, wall_ms;
    bool converged = false;
    int iterations = 0;
};
ConvergenceRecord parse_convergence_log(const std::string& text);

// Executes the configured run, writes artifacts under output.dir (solve:
// summary.json, convergence.log, per-mode CSVs; sweep: sweep.csv), echoes a
// summary to stdout and returns the process exit code: 0 success, 2 config,
// 3 divergence / non-convergence, 4 numerical failure.
int run(const RunConfig& cfg);

}  // namespace diskflow
