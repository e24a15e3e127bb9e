#pragma once
// Radial grids, Fourier-mode profiles and the field-expansion container used
// by every solver stage, together with the polar calculus on single modes
// (projection, synthesis, rot, div, weighted norms) and CSV serialization.
//
// Geometry: the domain is the exterior of the unit disk. A vector field is
// stored per Fourier mode n as complex radial profiles (v_r,n(r), v_th,n(r)),
// the field being sum_n [v_r,n e^{in th} e_r + v_th,n e^{in th} e_th].
// Real fields satisfy v_{-n} = conj(v_n).

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "diskflow/errors.hpp"

namespace diskflow {

using cplx = std::complex<double>;

// Background-flow parameters: the base state is alpha*U - gamma*W with
// U = x^perp/|x|^2 (swirl) and W = x/|x|^2 (sink). gamma > 2 is required
// throughout; every estimate degenerates as gamma -> 2.
struct PhysParams {
    double alpha = 1.0;
    double gamma = 3.0;

    void validate() const; // throws ConfigError
};

// Discretisation and iteration controls.
//   rho        target decay exponent for the perturbation, 2 < rho <= min(gamma, 3);
//              the nonlinear solver additionally requires rho < 3
//   n_max      Fourier truncation: modes |n| <= n_max
//   r_max      outer truncation radius of the radial grid
//   m_nodes    radial nodes, logarithmically spaced on [1, r_max]
//   quad_tol   acceptance threshold for boundary-functional residuals
//   delta      radius of the contraction ball used for certification
//   c0         prefactor of the contraction constant
struct SolverParams {
    double rho = 2.5;
    int n_max = 16;
    double r_max = 1e4;
    int m_nodes = 2048;
    double quad_tol = 1e-8;
    double picard_tol = 1e-10;
    int picard_max_iter = 50;
    double delta = 5e-3;
    double c0 = 1.0;

    void validate(const PhysParams& phys, bool nonlinear) const; // throws ConfigError
};

// Logarithmically spaced radial nodes with r(0) = 1 and r(m-1) = r_max,
// i.e. r(i) = exp(i*log_step). Uniform in t = log r.
class RadialGrid {
  public:
    RadialGrid() = default;
    RadialGrid(double r_max, int m_nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    double r(int i) const { return nodes_[i]; }
    double t(int i) const { return log_step_ * i; }
    double log_step() const { return log_step_; }
    double r_max() const { return nodes_.back(); }
    const std::vector<double>& nodes() const { return nodes_; }

    // Largest i with r(i) <= r, clamped to [0, size()-2]; r must lie in [1, r_max].
    int interval_index(double r) const;

    bool compatible_with(const RadialGrid& other) const;

  private:
    std::vector<double> nodes_;
    double log_step_ = 0.0;
};

// Scalar mode profile (vorticity, pressure, ...).
struct ModeScalar {
    int n = 0;
    std::vector<cplx> values;
};

// Vector mode profile in the polar frame.
struct ModeVector {
    int n = 0;
    std::vector<cplx> vr;
    std::vector<cplx> vtheta;
};

// A truncated Fourier expansion of a vector field. Modes are stored sparsely
// and iterated in ascending n for deterministic reductions.
class FieldExpansion {
  public:
    FieldExpansion() = default;
    explicit FieldExpansion(const RadialGrid& grid) : grid_(grid) {}

    const RadialGrid& grid() const { return grid_; }
    bool empty() const { return modes_.empty(); }
    bool has_mode(int n) const { return modes_.count(n) != 0; }
    const ModeVector& mode(int n) const;
    void set_mode(ModeVector mv);
    ModeVector& ensure_mode(int n); // creates a zero profile if absent
    std::vector<int> mode_numbers() const;

    // max over modes/nodes of |f_{-n} - conj(f_n)| (missing partner counts
    // as a zero profile); 0 for expansions of real fields.
    double conjugate_symmetry_defect() const;

  private:
    RadialGrid grid_;
    std::map<int, ModeVector> modes_;
};

// Cartesian components of a field sampled at polar coordinates (r, theta).
using FieldSampler = std::function<std::array<double, 2>(double r, double theta)>;

// Fourier projection of a sampled field onto mode n by the periodic trapezoid
// rule with n_quad equispaced angles (exact for trigonometric polynomials of
// degree < n_quad - |n|). n_quad = 0 picks a safe default. Non-finite samples
// are rejected with the offending location in the message.
ModeVector project_mode(const FieldSampler& sampler, int n, const RadialGrid& grid,
                        int n_quad = 0);

// Pointwise evaluation of the expansion (real part), returned in Cartesian
// components. Radial interpolation between nodes is geometric (linear in
// log r / log magnitude) for power-law fidelity, with a linear-in-value
// fallback near zeros and sign changes.
std::array<double, 2> synthesize(const FieldExpansion& e, double r, double theta);

// Scalar vorticity profile of one mode: (1/r) d(r v_th)/dr - (i n / r) v_r.
// Radial derivatives use three-point stencils (one-sided at the ends).
ModeScalar rot_mode(const ModeVector& v, const RadialGrid& grid);

// Divergence profile of one mode: (1/r) d(r v_r)/dr + (i n / r) v_th.
ModeScalar div_mode(const ModeVector& v, const RadialGrid& grid);

// d/dr of a profile on the grid, three-point stencils, one-sided at the ends.
std::vector<cplx> radial_derivative(const RadialGrid& grid, const std::vector<cplx>& values);

// sup_r r^s |f(r)| over the grid nodes.
double weighted_sup_norm(const ModeScalar& f, double s, const RadialGrid& grid);
double weighted_sup_norm(const ModeVector& v, double s, const RadialGrid& grid);

// Pointwise gradient magnitude of one vector mode,
//   |grad v_n|^2 = |v_r'|^2 + |v_th'|^2
//                + (|i n v_r - v_th|^2 + |v_r + i n v_th|^2) / r^2,
// reduced to sup_r r^s |grad v_n|.
double grad_weighted_sup_norm(const ModeVector& v, double s, const RadialGrid& grid);

// l^1-over-modes aggregation of weighted sup norms.
double l1_weighted_norm(const FieldExpansion& e, double s);

// Solution-space norm surrogate: ||v||_{l1,rho-1} + ||grad v||_{l1,rho}.
double xrho_norm(const FieldExpansion& e, double rho);

// Least-squares fit of log|f| against log r over grid nodes in [r_lo, r_hi].
struct DecayFit {
    double slope = 0.0;
    double rms_residual = 0.0; // in log|f|
    int n_points = 0;
};
DecayFit fit_decay_slope(const RadialGrid& grid, const std::vector<double>& magnitudes,
                         double r_lo, double r_hi);
DecayFit fit_decay_slope(const RadialGrid& grid, const std::vector<cplx>& values,
                         double r_lo, double r_hi);

// Background flow alpha*U - gamma*W as a mode-0 profile: v_r = -gamma/r,
// v_th = alpha/r.
ModeVector background_mode(const PhysParams& phys, const RadialGrid& grid);

// --- CSV serialization -----------------------------------------------------
// One profile per file. First line "# n=<n> gamma=<gamma> alpha=<alpha>",
// then a column header ("r,re,im" or "r,re_vr,im_vr,re_vtheta,im_vtheta"),
// then one row per node with round-trip-exact formatting. Emission is
// byte-deterministic for identical inputs.

void write_mode_csv(std::ostream& os, const ModeScalar& f, const RadialGrid& grid,
                    const PhysParams& phys);
void write_mode_csv(std::ostream& os, const ModeVector& v, const RadialGrid& grid,
                    const PhysParams& phys);
void write_mode_csv(const std::string& path, const ModeScalar& f, const RadialGrid& grid,
                    const PhysParams& phys);
void write_mode_csv(const std::string& path, const ModeVector& v, const RadialGrid& grid,
                    const PhysParams& phys);

struct ModeCsv {
    bool is_vector = false;
    ModeScalar scalar;
    ModeVector vector;
    RadialGrid grid;
    double gamma = 0.0;
    double alpha = 0.0;
};
ModeCsv read_mode_csv(std::istream& is);
ModeCsv read_mode_csv(const std::string& path);

} // namespace diskflow
