#pragma once
// Picard iteration for the full perturbation problem.
//
// The perturbation v of the background swirl/sink flow solves
//   -Lap v + b^perp rot v + grad q = -v^perp rot v + f,   div v = 0,
//   v = 0 on the boundary circle, v -> 0 at infinity,
// which the solver treats as the fixed-point problem v = T(v): apply the
// linear mode solver to the effective forcing f + N(v), where
//   N(v) = -v^perp rot v,   (N_r)_n = sum_m v_th,m w_{n-m},
//                           (N_th)_n = -sum_m v_r,m w_{n-m},
// with w_m the scalar vorticity modes.  Iteration starts from v = 0 and is
// truncated to modes |n| <= n_max (Galerkin in the angle).
//
// Convergence is measured in the discrete solution-space surrogate
//   ||v||_X = sum_n sup_r r^{rho-1} |v_n| + sum_n sup_r r^{rho} |grad v_n|,
// with analytic radial derivatives inside the loop.  The iteration stops when
// the difference of consecutive iterates drops below picard_tol (absolute);
// running out of iterations is reported as converged = false, never as an
// exception.  A run is flagged `certified` when the small-data conditions
// underlying the contraction argument hold numerically: 2*kappa*delta < 1 and
// ||f||_{l1,2rho-1} <= delta^2.  Violations downgrade to warnings because the
// iteration frequently still converges outside the certified regime.

#include <map>
#include <string>
#include <vector>

#include "diskflow/linear_solver.hpp"

namespace diskflow {

// Iteration trace. Entry k describes iterate v_{k+1} = T(v_k).
struct PicardState {
    int iterations = 0;                      // linear solves performed
    std::vector<double> norm_history;        // ||v_{k+1}||_X
    std::vector<double> diff_history;        // ||v_{k+1} - v_k||_X
    std::vector<double> contraction_ratios;  // diff_{k+1} / diff_k
    std::vector<double> wall_ms;             // wall-clock per iteration
};

struct AsymptoticsReport {
    bool background_only = false;  // f = 0: the solution is the background flow
    DecayFit velocity_slope;       // fit of l1-over-modes |v| against r
    DecayFit vorticity_slope;      // fit of l1-over-modes |rot v| against r
    double r_lo = 0.0, r_hi = 0.0;
    std::string to_text() const;
};

struct FullSolution {
    PhysParams phys;
    SolverParams solver;
    RadialGrid grid;
    std::map<int, LinearModeSolution> modes;  // converged perturbation, by mode
    PicardState picard;
    SolveReport report;  // per-mode statistics of the final linear solve
    bool converged = false;
    bool certified = false;
    double kappa_bound = 0.0;   // contraction constant estimate
    double forcing_norm = 0.0;  // ||f||_{l1, 2rho-1}
    std::vector<std::string> warnings;

    // Perturbation velocity as a field expansion.
    FieldExpansion velocity() const;
    // Background + perturbation (mode 0 carries the swirl/sink profile).
    FieldExpansion total_velocity() const;
};

// N(w) = -w^perp rot w truncated to output modes |n| <= n_max_out. The first
// overload measures vorticity by finite differences of the stored profiles;
// the second uses supplied per-mode vorticities (keys must cover every mode
// of w), which the Picard loop exploits to avoid finite-difference noise.
FieldExpansion nonlinear_term(const FieldExpansion& w, int n_max_out);
FieldExpansion nonlinear_term(const FieldExpansion& w,
                              const std::map<int, ModeScalar>& rot_w, int n_max_out);

// One fixed-point application: solve the linear problem with forcing
// f + N(w). Grids of w and f must match.
FieldExpansion picard_map(const FieldExpansion& w, const FieldExpansion& f,
                          const PhysParams& phys, const SolverParams& solver);

// Full solve from v = 0. Throws ConfigError for malformed input; numerical
// failure inside a linear solve propagates as NumericalError; plain
// non-convergence is reported through `converged`.
FullSolution solve_ns(const FieldExpansion& f, const PhysParams& phys,
                      const SolverParams& solver);

// Far-field decay of the converged perturbation, fitted over
// [10, r_max/10] (clamped to the grid).
AsymptoticsReport asymptotics_report(const FullSolution& sol);

// Pressure-gradient modes of the full flow u = b + v:
//   grad p = -grad(|u|^2/2) + grad q,
// assembled per mode with analytic radial derivatives; the |u|^2 convolution
// fills modes |n| <= 2*n_max.
std::map<int, ModeVector> pressure_gradient_modes(const FullSolution& sol);

// Deterministic run summary (JSON object, sorted keys, no timestamps).
std::string run_summary_json(const FullSolution& sol);

// One line per Picard iteration: norm, difference, ratio, wall time. The
// wall-time column is the only nondeterministic output the solver emits.
std::string convergence_log(const FullSolution& sol);

}  // namespace diskflow
