#pragma once
// Independent verification paths for the solver.
//
// Everything in this module deliberately avoids the production quadrature
// and calibration code: residuals are measured with finite differences on
// point samplers, the mode ODE is re-solved with a dense tridiagonal
// finite-difference scheme, and the analytic kernel bounds are checked with
// a self-contained adaptive integrator.  Agreement between these paths and
// the spectral solver is the core correctness evidence for the project.
//
// Contents:
//   * the explicit rotationally symmetric solution family (swirl + sink)
//     with its closed-form pressure gradient,
//   * samplers (exact, zero, spline-interpolated mode sets) and Halton
//     sample points for residual sweeps,
//   * a pointwise Navier-Stokes residual evaluator,
//   * a dense boundary-value re-solve of the vorticity mode ODE,
//   * checkers for the power-weighted kernel integral bounds and the
//     Cauchy-Schwarz forcing integral bounds used by the contraction
//     estimate,
//   * a structured verification report type and a suite runner used by the
//     command-line `verify` mode.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "diskflow/fields.hpp"
#include "diskflow/kernels.hpp"

namespace diskflow {

// ---------------------------------------------------------------------------
// Explicit solution family
// ---------------------------------------------------------------------------

// Parameters of the force-free family
//   u = alpha*U - gamma*W + t*A,
// where U is the unit vortex (tangential, 1/r), W the unit source (radial,
// 1/r), and A the swirl profile A = (1 - r^{2-gamma})/(gamma-2) * U that
// vanishes on the boundary circle.  For every (alpha, gamma>2, t) this u
// solves the stationary system with f = 0 together with an explicit radial
// pressure.
struct HamelParams {
    double alpha = 0.0;
    double gamma = 3.0;
    double t = 0.0;
};

// Cartesian velocity components of the family at polar point (r, theta).
std::array<double, 2> hamel_velocity(const HamelParams& hp, double r, double theta);

// Polar components (d/dr, 0) of the pressure gradient of the family at
// radius r, differentiated in closed form (no finite differences).
std::array<double, 2> hamel_pressure_gradient(const HamelParams& hp, double r);

// Samplers (Cartesian components at polar points) wrapping the two functions
// above, suitable for ns_residual.
FieldSampler hamel_velocity_sampler(const HamelParams& hp);
FieldSampler hamel_pressure_gradient_sampler(const HamelParams& hp);

// The zero field.
FieldSampler zero_sampler();

// ---------------------------------------------------------------------------
// Samplers and sample points
// ---------------------------------------------------------------------------

// C^2 sampler for a finite mode set: each profile component is interpolated
// by a natural cubic spline in t = log r (real and imaginary parts
// separately), then the angular sum is evaluated exactly.  Smoothness in r
// matters because the residual evaluator differentiates the sampler twice;
// piecewise-linear interpolation would leave O(1) kinks in second
// differences.  Outside [1, r_max] the end cubics extrapolate.
FieldSampler spline_field_sampler(const RadialGrid& grid,
                                  std::map<int, ModeVector> modes);

// `count` low-discrepancy points (r, theta) in [r_lo, r_hi) x [0, 2*pi),
// from the Halton sequence in bases 2 and 3.  Deterministic.
std::vector<std::array<double, 2>> halton_points(int count, double r_lo, double r_hi);

// ---------------------------------------------------------------------------
// Pointwise momentum residual
// ---------------------------------------------------------------------------

struct ResidualReport {
    double max_residual = 0.0;  // sup over evaluated points of |residual| (2-vector norm)
    int evaluated = 0;
    int skipped = 0;  // points closer than 2h to the boundary circle
};

// Evaluates | -Lap(u) + (u . grad)u + grad_p - f | at each sample point with
// second-order central differences of spacing h applied to the velocity
// sampler (5-point Cartesian stencils for the Laplacian and first
// derivatives).  grad_p and f are sampled pointwise, not differentiated.
// Points with r - 1 < 2h are skipped and counted, never silently dropped.
ResidualReport ns_residual(const FieldSampler& velocity,
                           const FieldSampler& grad_p,
                           const FieldSampler& forcing,
                           double h,
                           const std::vector<std::array<double, 2>>& points);

// ---------------------------------------------------------------------------
// Dense boundary-value re-solve of the vorticity mode ODE
// ---------------------------------------------------------------------------

// Solves, for n != 0,
//   -w'' - (1+gamma)/r w' + (n^2 + i*alpha*n)/r^2 w = (rot f)_n
// on the grid by a second-order finite-difference scheme in t = log r:
// Dirichlet value at r = 1 determined by shooting on the vanishing of the
// compatibility functional int_1^inf s^{1-|n|} w(s) ds, and the outflow
// condition w' + (zeta + gamma/2)/r w = 0 imposed at r_max through a ghost
// node, where zeta is the decaying indicial exponent.  Everything here
// (tridiagonal solve, local quadrature of the functional, tail handling) is
// independent of the production solver.
ModeScalar dense_bvp_mode(int n, const ModeVector& f_n, const PhysParams& phys,
                          const RadialGrid& grid);

// ---------------------------------------------------------------------------
// Structured check reports
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;    // which inequality / invariant
    std::string params;  // "n=3 alpha=1 gamma=2.5 rho=2.3 r=7.25" style
    double margin = 0.0; // signed slack, >= 0 means satisfied
    bool ok = false;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool all_ok() const;
    int failures() const;
    // Fixed-width table, one row per check, deterministic.
    std::string to_text() const;
    void add(std::string name, std::string params, double margin, bool ok);
    void merge(const VerificationReport& other);
};

// ---------------------------------------------------------------------------
// Analytic kernel / forcing integral bounds
// ---------------------------------------------------------------------------

// Checks the closed-form bounds on the power-weighted kernel integrals that
// drive the decay estimates.  With xi = Re(zeta(n)) and prefactors as in the
// contraction analysis, for each sample radius r > 1 it verifies by
// independent adaptive quadrature:
//   (for 2 < rho <= gamma)
//   r^{-xi-gamma/2} * int_1^r s^{xi+gamma/2-2rho+1} ds
//       <= min(1/(rho-2), 1/(xi-gamma/2)) * r^{-rho}
//   r^{xi-gamma/2} * int_r^inf s^{-xi+gamma/2-2rho+1} ds
//       <= 1/(xi-gamma/2) * r^{-rho}
//   (for 2 < rho <= 3)
//   r^{-|n|-1} * int_1^r s^{|n|-rho+1} ds  <= r^{1-rho}/(|n|-rho+2)   (rho < 3)
//   r^{-2}     * int_1^r s^{-1} ds         = r^{-2} log r             (rho = 3, |n| = 1,
//                                            equality to 1e-10)
//   r^{-|n|-1} * int_1^r s^{|n|-2} ds      <= r^{-2}/(|n|-1)          (rho = 3, |n| > 1)
//   r^{|n|-1}  * int_r^inf s^{-|n|-rho+1} ds <= r^{1-rho}/(|n|+rho-2)
VerificationReport check_kernel_integral_bounds(int n, double alpha, double gamma,
                                                double rho,
                                                const std::vector<double>& r_samples);

// Checks the Cauchy-Schwarz bounds on the weighted forcing integrals: for
// each sample radius r inside the grid, with F = |f_n| (pointwise modulus of
// the vector profile) and both sides truncated at r_max,
//   r^{-xi-gamma/2} int_1^r s^{xi+gamma/2} F ds
//       <= (xi-gamma/2)^{-1/2} (int_1^r s^4 F^2 s ds)^{1/2} r^{-2}
//   r^{xi-gamma/2} int_r^rmax s^{-xi+gamma/2} F ds
//       <= (xi-gamma/2)^{-1/2} (int_r^rmax s^4 F^2 s ds)^{1/2} r^{-2}
VerificationReport check_forcing_integral_bounds(int n, double alpha, double gamma,
                                                 const ModeVector& f_n,
                                                 const RadialGrid& grid,
                                                 const std::vector<double>& r_samples);

// ---------------------------------------------------------------------------
// Suite runner (used by the CLI `verify` mode)
// ---------------------------------------------------------------------------

// Runs the oracle cross-checks end to end: explicit-family residuals,
// indicial-root identities and inequalities, the closed-form zero-mode
// solution, spectral-vs-dense mode agreement, boundary calibration sizes,
// decay slopes, the product norm inequality, and randomized sweeps of the
// two integral-bound checkers.  `quick` trims the sweeps for use as a smoke
// test.
VerificationReport run_verification_suite(bool quick);

}  // namespace diskflow
