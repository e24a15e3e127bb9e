#pragma once
// Mode-by-mode closed-form solution of the linearized exterior-flow system
//
//   -Lap v + omega * b^perp + grad q = f,   div v = 0,   v|_{r=1} = 0,
//
// with background b = (-gamma/r) e_r + (alpha/r) e_th and omega = rot v.
//
// Zero mode: v_{r,0} = 0 and v_{th,0} is the explicit three-term Green
// formula with homogeneous solutions r^{1-gamma}, r^{-1}; independent of
// alpha. Non-zero mode n: the vorticity solves
//   -omega'' - (1+gamma)/r omega' + (n^2 + i alpha n)/r^2 omega = (rot f)_n,
// whose decaying solution is omega_n = c_n r^{-zeta_n - gamma/2} + Phi_n,
// where Phi_n is the particular solution built from the integration-by-parts
// kernels and c_n is calibrated so the boundary functional d_n[omega_n]
// vanishes (equivalent to full no-slip after Biot-Savart reconstruction).
// The velocity is recovered by biot_savart; the pressure mode follows
// algebraically from the momentum equations:
//   q_n       = (r / (i n)) (f_th + omega' + (gamma/r) omega)      (n != 0)
//   dq_n / dr = f_r + ((alpha - i n)/r) omega
// (for div-free fields, (Lap v)_r = -(i n / r) omega and (Lap v)_th = omega').
// The zero-mode pressure is integrated inward from infinity.
//
// All radial derivatives entering the stored profiles are analytic
// (quadrature identities), never finite differences.

#include <map>
#include <string>
#include <vector>

#include "diskflow/fields.hpp"
#include "diskflow/kernels.hpp"

namespace diskflow {

struct LinearModeSolution {
    int n = 0;
    ModeVector velocity;
    ModeVector velocity_dr;  // (v_r', v_th'), analytic
    ModeScalar vorticity;
    ModeScalar pressure;     // q_n; zero mode anchored to q -> 0 at infinity
    ModeScalar pressure_dr;  // dq_n/dr
    cplx c_n = 0.0;          // decaying-homogeneous weight (0 for n = 0)
    cplx d_n = 0.0;          // residual boundary functional after calibration
    double rot_consistency = 0.0; // sup |rot_fd(v) - omega| / sup |omega|
};

// Zero-mode closed form. Requires f0.n == 0 and integrable s^2 f_th tail.
LinearModeSolution solve_mode_zero(const ModeVector& f0, const PhysParams& phys,
                                   const RadialGrid& grid);

// Particular vorticity solution for mode n != 0: Phi_n = r^{-gamma/2} Psi_n,
//   Psi_n = -(r^{-zeta}/(2 zeta)) Int_1^r s^{zeta+gamma/2} g_in ds
//         + (r^{+zeta}/(2 zeta)) Int_r^inf s^{-zeta+gamma/2} g_out ds,
//   g_in = (zeta+gamma/2) f_th + i n f_r,  g_out = (zeta-gamma/2) f_th - i n f_r.
// r^{zeta} is never materialised alone: each integral carries a matched
// damping exponent so only O(r) combinations are exponentiated.
std::vector<cplx> compute_Phi_n(const ModeVector& fn, const ModeKernelData& k,
                                const RadialGrid& grid);

// Calibration constant c_n = -(zeta_n + |n| + gamma/2 - 2) Int_1^inf s^{-|n|+1} Phi ds,
// using that d_n of the pure power r^{-zeta-gamma/2} is 1/(zeta+|n|+gamma/2-2).
cplx compute_c_n(const std::vector<cplx>& phi, const ModeKernelData& k,
                 const RadialGrid& grid);

// Full mode solve: Phi, calibrated c_n (closed form, then refined against the
// discrete functional until |d_n[omega]| reaches the rounding floor),
// Biot-Savart velocity, algebraic pressure. Throws NumericalError if the
// calibrated |d_n| stays above quad_tol (quadrature/tail inconsistency).
LinearModeSolution solve_mode_nonzero(const ModeVector& fn, const ModeKernelData& k,
                                      const RadialGrid& grid, double quad_tol = 1e-8);

struct SolveReport {
    struct ModeStats {
        int n = 0;
        double omega_sup = 0.0; // sup r^rho |omega_n|
        double v_sup = 0.0;     // sup r^{rho-1} |v_n|
        double grad_sup = 0.0;  // sup r^rho |grad v_n| (analytic derivatives)
        double d_n_abs = 0.0;
        double rot_consistency = 0.0;
    };
    double rho = 0.0;
    std::vector<ModeStats> modes; // ascending n
    double l1_omega = 0.0;
    double l1_v = 0.0;
    double l1_grad = 0.0;

    std::string to_text() const; // deterministic key-value summary
};

struct LinearSolution {
    RadialGrid grid;
    std::map<int, LinearModeSolution> modes;

    FieldExpansion velocity() const;
};

// Solves every mode present in f (fan-out across threads, capped by the
// DISKFLOW_MAX_THREADS environment variable; reduction in ascending mode
// order, so results are deterministic). A failing mode aborts the solve with
// the mode number prepended to the error.
LinearSolution solve_linear(const FieldExpansion& f, const PhysParams& phys,
                            const SolverParams& solver, SolveReport* report = nullptr);

// Contraction-constant bound kappa = C0 (sqrt|alpha| + gamma) gamma
// / ((rho-2)^2 (3-rho)); requires 2 < rho < 3 and rho <= gamma.
double kappa(const PhysParams& phys, double rho, double c0);

// Worker cap: DISKFLOW_MAX_THREADS if set (>= 1), else hardware concurrency.
int max_solver_threads();

} // namespace diskflow
