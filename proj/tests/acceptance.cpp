// Acceptance gate: one pass/fail line per shipped guarantee, with the
// measured value, the pinned tolerance and the runtime budget on each line.
// Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "diskflow/biot_savart.hpp"
#include "diskflow/errors.hpp"
#include "diskflow/fields.hpp"
#include "diskflow/kernels.hpp"
#include "diskflow/linear_solver.hpp"
#include "diskflow/nonlinear_solver.hpp"
#include "diskflow/oracle.hpp"

using namespace diskflow;

namespace {

template <typename... Args>
std::string strf(const char* fmt, Args... args) {
    char buf[768];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return std::string(buf);
}

struct Outcome {
    bool ok = false;
    std::string detail;
};

// Swirl-only power-law forcing mode: f_r = 0, f_theta = amp * r^{-mu}.
ModeVector swirl_forcing(const RadialGrid& grid, int n, double amp, double mu) {
    ModeVector mv;
    mv.n = n;
    mv.vr.assign(grid.size(), cplx(0.0));
    mv.vtheta.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) mv.vtheta[i] = amp * std::pow(grid.r(i), -mu);
    return mv;
}

FieldExpansion pair_forcing(const RadialGrid& grid, int n, double amp, double mu) {
    FieldExpansion f(grid);
    f.set_mode(swirl_forcing(grid, n, 0.5 * amp, mu));
    f.set_mode(swirl_forcing(grid, -n, 0.5 * amp, mu));
    return f;
}

// Closed-form calibrated vorticity mode for f_theta = r^{-mu}, f_r = 0:
//   omega(r) = B r^{1-mu} + (H + c) r^{-zeta-gamma/2},
//   B = (mu-1)/(q1 q2), H = (zeta+gamma/2)/(2 zeta q1),
//   q1 = zeta+gamma/2-mu+1, q2 = -zeta+gamma/2-mu+1,
// with c chosen so the compatibility functional int_1^inf s^{1-|n|} omega ds
// vanishes. Pure analysis; no quadrature, no production solver code.
struct ClosedFormOmega {
    cplx B, G;  // G = H + c
    cplx decay_exponent;  // -zeta-gamma/2
    double mu;
    cplx operator()(double r) const {
        return B * std::pow(r, 1.0 - mu) + G * std::pow(cplx(r), decay_exponent);
    }
};

ClosedFormOmega closed_form_omega(int n, double alpha, double gamma, double mu) {
    PhysParams phys;
    phys.alpha = alpha;
    phys.gamma = gamma;
    const cplx zeta = compute_kernel_data(n, phys).zeta;
    const double g2 = 0.5 * gamma;
    const cplx q1 = zeta + g2 - mu + 1.0;
    const cplx q2 = -zeta + g2 - mu + 1.0;
    const cplx B = (mu - 1.0) / (q1 * q2);
    const cplx H = (zeta + g2) / (2.0 * zeta * q1);
    const double an = std::abs(n);
    // d[omega_forced] with int_1^inf s^{1-|n|} r^{1-mu} ds = 1/(mu+|n|-3)
    // and int_1^inf s^{1-|n|} s^{-zeta-g/2} ds = 1/(zeta+g/2+|n|-2).
    const cplx shift = zeta + g2 + an - 2.0;
    const cplx d_forced = B / (mu + an - 3.0) + H / shift;
    const cplx c = -shift * d_forced;
    ClosedFormOmega cf;
    cf.B = B;
    cf.G = H + c;
    cf.decay_exponent = -zeta - g2;
    cf.mu = mu;
    return cf;
}

double fit_order(double coarse, double fine) { return std::log2(coarse / fine); }

// Least-squares line through (k, log y_k).
// Returns {ratio, rms log residual, rms residual / std of the log data}; the
// last entry is the normalized regression residual ("fraction of the decay
// the line fails to explain").
std::array<double, 3> loglinear_ratio(const std::vector<double>& ys) {
    const int n = static_cast<int>(ys.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < n; ++k) {
        const double x = k, y = std::log(ys[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double rss = 0, tss = 0;
    for (int k = 0; k < n; ++k) {
        const double y = std::log(ys[k]);
        const double e = y - (icpt + slope * k);
        rss += e * e;
        tss += (y - sy / n) * (y - sy / n);
    }
    return {std::exp(slope), std::sqrt(rss / n), std::sqrt(rss / tss)};
}

// --------------------------------------------------------------------------
// Criterion 1: the explicit force-free family annihilates the momentum
// residual at second order, and the h = 1e-3 residual near r = 2 is tiny.
// --------------------------------------------------------------------------
Outcome criterion_family_residual() {
    const auto pts = halton_points(64, 1.6, 2.6);
    double worst_fine = 0.0, worst_coarse = 0.0;
    for (double a : {0.0, 1.0}) {
        for (double g : {2.5, 3.0, 4.0}) {
            for (double t : {0.0, 0.5, 1.0}) {
                const HamelParams hp{a, g, t};
                const FieldSampler u = hamel_velocity_sampler(hp);
                const FieldSampler gp = hamel_pressure_gradient_sampler(hp);
                const FieldSampler z = zero_sampler();
                const double coarse = ns_residual(u, gp, z, 2e-3, pts).max_residual;
                const double fine = ns_residual(u, gp, z, 1e-3, pts).max_residual;
                worst_coarse = std::max(worst_coarse, coarse);
                worst_fine = std::max(worst_fine, fine);
            }
        }
    }
    const double order = fit_order(worst_coarse, worst_fine);
    const bool ok = worst_fine < 1e-6 && order >= 1.9;
    return {ok, strf("max residual %.3g < 1e-6 at h=1e-3, order %.3f >= 1.9 (18 combos)",
                     worst_fine, order)};
}

// --------------------------------------------------------------------------
// Criterion 2: zero-mode closed form v_theta = r^{-2} log r.
// --------------------------------------------------------------------------
Outcome criterion_zero_mode() {
    const RadialGrid grid(1e4, 1025);
    PhysParams phys;
    phys.alpha = 1.0;
    phys.gamma = 3.0;
    const ModeVector f0 = swirl_forcing(grid, 0, 1.0, 4.0);
    const LinearModeSolution sol = solve_mode_zero(f0, phys, grid);
    double worst = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double r = grid.r(i);
        const double want = std::log(r) / (r * r);
        const double diff = std::abs(sol.velocity.vtheta[i] - want);
        if (i == 0) {
            if (diff != 0.0) worst = std::max(worst, 1.0);  // exact zero required
        } else {
            worst = std::max(worst, diff / want);
        }
    }
    return {worst <= 1e-8,
            strf("node-wise rel error %.3g <= 1e-8 (1025 nodes, gamma=3)", worst)};
}

// --------------------------------------------------------------------------
// Criterion 3: indicial-root identity and inequality battery.
// --------------------------------------------------------------------------
Outcome criterion_kernel_algebra() {
    double worst_rel = 0.0;
    double worst_margin = 1.0;
    int count = 0;
    for (int n = 1; n <= 64; ++n) {
        for (double a : {0.0, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0}) {
            for (double g : {2.1, 2.5, 3.0, 5.0, 10.0}) {
                PhysParams phys;
                phys.alpha = a;
                phys.gamma = g;
                const ModeKernelData k = compute_kernel_data(n, phys);
                const cplx want(n * n + 0.25 * g * g, a * n);
                worst_rel = std::max(worst_rel,
                                     std::abs(k.zeta * k.zeta - want) / std::abs(want));
                const XiCheck xc = check_xi_inequalities(k);
                if (!xc.ok) return {false, "inequality violation at n=" + std::to_string(n)};
                worst_margin = std::min(worst_margin, xc.worst_rel_margin);
                ++count;
            }
        }
    }
    const bool ok = worst_rel <= 1e-13 && worst_margin >= 0.0;
    return {ok, strf("zeta^2 rel error %.3g <= 1e-13, min inequality margin %.3g >= 0 "
                     "(%d cases)",
                     worst_rel, worst_margin, count)};
}

// --------------------------------------------------------------------------
// Criterion 4: Biot-Savart invariants under grid refinement.
// --------------------------------------------------------------------------
Outcome criterion_biot_savart() {
    std::mt19937 rng(90210u);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double min_div_order = 10.0, min_rot_order = 10.0;
    double worst_vr1 = 0.0;
    bool exact_vr1 = true;
    for (int c = 0; c < 20; ++c) {
        const int mag = 1 + static_cast<int>(uni(rng) * 6.0);
        const int n = (uni(rng) < 0.5) ? -mag : mag;
        const double mu = 2.2 + 2.3 * uni(rng);
        const cplx coef(uni(rng) - 0.5, uni(rng) - 0.5);
        std::array<double, 3> div_err{}, rot_err{};
        int idx = 0;
        for (int m : {513, 1025}) {
            const RadialGrid grid(1e3, m);
            ModeScalar w;
            w.n = n;
            w.values.resize(m);
            for (int i = 0; i < m; ++i) w.values[i] = coef * std::pow(grid.r(i), -mu);
            const ModeVector v = biot_savart(w, grid);
            const ModeScalar dv = div_mode(v, grid);
            const ModeScalar rv = rot_mode(v, grid);
            double dsup = 0.0, rsup = 0.0, wsup = 0.0;
            for (int i = 0; i < m; ++i) {
                dsup = std::max(dsup, std::abs(dv.values[i]));
                rsup = std::max(rsup, std::abs(rv.values[i] - w.values[i]));
                wsup = std::max(wsup, std::abs(w.values[i]));
            }
            div_err[idx] = dsup;
            rot_err[idx] = rsup / wsup;
            if (std::abs(v.vr[0]) != 0.0) exact_vr1 = false;
            worst_vr1 = std::max(worst_vr1, std::abs(v.vr[0]));
            ++idx;
        }
        // Below ~1e-12 the defects sit on the rounding floor and the order is
        // no longer measurable; everything above it must refine at >= 1.9.
        if (div_err[1] > 1e-12) {
            min_div_order = std::min(min_div_order, fit_order(div_err[0], div_err[1]));
        }
        if (rot_err[1] > 1e-12) {
            min_rot_order = std::min(min_rot_order, fit_order(rot_err[0], rot_err[1]));
        }
    }
    const bool ok = min_div_order >= 1.9 && min_rot_order >= 1.9 && exact_vr1;
    return {ok, strf("div order %.3f, rot order %.3f (each >= 1.9), V_r(1) %s (20 cases)",
                     min_div_order, min_rot_order,
                     exact_vr1 ? "identically 0" : strf("= %.3g", worst_vr1).c_str())};
}

// The cross-validation parameter sweep shared by criteria 5 and 6.
struct SweepCase {
    int n;
    double alpha, gamma, rho;
};
std::vector<SweepCase> cross_validation_cases() {
    std::vector<SweepCase> out;
    for (int n : {1, 2, 5}) {
        for (double a : {0.0, 1.0, 10.0}) {
            for (double g : {2.5, 3.0, 4.0}) {
                for (double r : {2.3, 2.5, 2.9}) out.push_back({n, a, g, r});
            }
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// Criterion 5: boundary calibration of every non-zero-mode linear solve.
// --------------------------------------------------------------------------
Outcome criterion_calibration() {
    const RadialGrid grid(1e4, 1025);
    double worst_dn = 0.0, worst_bnd = 0.0;
    int solves = 0;
    for (const SweepCase& sc : cross_validation_cases()) {
        PhysParams phys;
        phys.alpha = sc.alpha;
        phys.gamma = sc.gamma;
        const ModeKernelData k = compute_kernel_data(sc.n, phys);
        const ModeVector f = swirl_forcing(grid, sc.n, 1.0, sc.rho + 1.0);
        const LinearModeSolution sol = solve_mode_nonzero(f, k, grid, 1e-8);
        worst_dn = std::max(worst_dn, std::abs(sol.d_n));
        worst_bnd = std::max(worst_bnd, std::max(std::abs(sol.velocity.vr[0]),
                                                 std::abs(sol.velocity.vtheta[0])));
        ++solves;
    }
    const bool ok = worst_dn <= 1e-8 && worst_bnd <= 1e-7;
    return {ok, strf("max |d_n| %.3g <= 1e-8, max |v(1)| %.3g <= 1e-7 (%d solves)",
                     worst_dn, worst_bnd, solves)};
}

// --------------------------------------------------------------------------
// Criterion 6: closed-form vorticity vs the dense finite-difference re-solve.
// --------------------------------------------------------------------------
Outcome criterion_oracle_equivalence() {
    const double r_max = 1e4;
    const int m_dense = 16 * 512 + 1;  // h small enough that FD error << 1e-4
    const RadialGrid dense(r_max, m_dense);
    double worst = 0.0;
    int cases = 0;
    for (const SweepCase& sc : cross_validation_cases()) {
        PhysParams phys;
        phys.alpha = sc.alpha;
        phys.gamma = sc.gamma;
        const double mu = sc.rho + 1.0;
        const ClosedFormOmega cf = closed_form_omega(sc.n, sc.alpha, sc.gamma, mu);
        const ModeVector f = swirl_forcing(dense, sc.n, 1.0, mu);
        const ModeScalar w = dense_bvp_mode(sc.n, f, phys, dense);
        double sup = 0.0, err = 0.0;
        for (int i = 0; i < dense.size() && dense.r(i) <= r_max / 10.0; ++i) {
            const cplx want = cf(dense.r(i));
            sup = std::max(sup, std::abs(want));
            err = std::max(err, std::abs(w.values[i] - want));
        }
        worst = std::max(worst, err / sup);
        ++cases;
    }
    return {worst <= 1e-4, strf("max rel Linf difference %.3g <= 1e-4 on [1, r_max/10] "
                                "(%d combos)",
                                worst, cases)};
}

// --------------------------------------------------------------------------
// Criterion 7: far-field decay rates, including the log-corrected profile.
// --------------------------------------------------------------------------
Outcome criterion_decay_rates() {
    // Slope checks in a window where the forced response dominates: gamma = 6
    // sinks the homogeneous tail (rate xi+gamma/2) and n = 3 sinks the
    // harmonic velocity admixture (rate |n|+1) far below the forced decay.
    const RadialGrid grid(1e4, 2049);
    PhysParams phys;
    phys.alpha = 1.0;
    phys.gamma = 6.0;
    const double rho = 2.5;
    const int n = 3;
    const ModeVector f = swirl_forcing(grid, n, 1.0, rho + 1.0);
    const LinearModeSolution sol =
        solve_mode_nonzero(f, compute_kernel_data(n, phys), grid, 1e-8);
    const DecayFit fw = fit_decay_slope(grid, sol.vorticity.values, 10.0, 100.0);
    std::vector<double> vmag(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        vmag[i] = std::hypot(std::abs(sol.velocity.vr[i]), std::abs(sol.velocity.vtheta[i]));
    }
    const DecayFit fv = fit_decay_slope(grid, vmag, 10.0, 100.0);
    const double werr = std::abs(fw.slope + rho) / rho;
    const double verr = std::abs(fv.slope + (rho - 1.0)) / (rho - 1.0);

    // |n| = 1, rho = 3, gamma >= 3: v picks up the log factor, so r^2|v|/log r
    // must flatten to a constant on [1e2, 1e3].
    const ModeVector f1 = swirl_forcing(grid, 1, 1.0, 4.0);
    const LinearModeSolution sol1 =
        solve_mode_nonzero(f1, compute_kernel_data(1, phys), grid, 1e-8);
    double lo = 1e300, hi = 0.0, mean = 0.0;
    int cnt = 0;
    for (int i = 0; i < grid.size(); ++i) {
        const double r = grid.r(i);
        if (r < 1e2 || r > 1e3) continue;
        const double mag =
            std::hypot(std::abs(sol1.velocity.vr[i]), std::abs(sol1.velocity.vtheta[i]));
        const double ratio = r * r * mag / std::log(r);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        mean += ratio;
        ++cnt;
    }
    mean /= cnt;
    const double spread = (hi - lo) / mean;

    const bool ok = werr <= 0.02 && verr <= 0.02 && spread <= 0.10;
    return {ok, strf("slopes %.4f vs -2.5 (err %.2f%%), %.4f vs -1.5 (err %.2f%%), "
                     "log-profile spread %.2f%% <= 10%%",
                     fw.slope, 100.0 * werr, fv.slope, 100.0 * verr, 100.0 * spread)};
}

// --------------------------------------------------------------------------
// Criterion 8: mode-convolution product inequality on random expansions.
// --------------------------------------------------------------------------
Outcome criterion_product_inequality() {
    std::mt19937 rng(5150u);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const RadialGrid grid(100.0, 129);
    const double s = 1.5, t = 2.5;
    const int trials = 1000;
    int violations = 0;
    double worst_margin = 1.0;
    for (int trial = 0; trial < trials; ++trial) {
        FieldExpansion w(grid);
        std::map<int, ModeScalar> rots;
        double nv = 0.0, nw = 0.0;
        for (int n = -3; n <= 3; ++n) {
            ModeVector mv;
            mv.n = n;
            mv.vr.resize(grid.size());
            mv.vtheta.resize(grid.size());
            ModeScalar ms;
            ms.n = n;
            ms.values.resize(grid.size());
            const cplx cr(uni(rng) - 0.5, uni(rng) - 0.5);
            const cplx ct(uni(rng) - 0.5, uni(rng) - 0.5);
            const cplx cw(uni(rng) - 0.5, uni(rng) - 0.5);
            const double av = s + 0.05 + 2.0 * uni(rng);
            const double aw = t + 0.05 + 2.0 * uni(rng);
            for (int i = 0; i < grid.size(); ++i) {
                mv.vr[i] = cr * std::pow(grid.r(i), -av);
                mv.vtheta[i] = ct * std::pow(grid.r(i), -av);
                ms.values[i] = cw * std::pow(grid.r(i), -aw);
            }
            w.set_mode(mv);
            rots.emplace(n, ms);
            nv += weighted_sup_norm(w.mode(n), s, grid);
            double sw = 0.0;
            for (int i = 0; i < grid.size(); ++i) {
                sw = std::max(sw, std::pow(grid.r(i), t) * std::abs(ms.values[i]));
            }
            nw += sw;
        }
        const FieldExpansion nl = nonlinear_term(w, rots, 6);
        double np = 0.0;
        for (int n : nl.mode_numbers()) np += weighted_sup_norm(nl.mode(n), s + t, grid);
        if (np > nv * nw * (1.0 + 1e-12)) ++violations;
        worst_margin = std::min(worst_margin, (nv * nw - np) / (nv * nw));
    }
    return {violations == 0, strf("%d trials, %d violations, worst margin %.3g >= 0",
                                  trials, violations, worst_margin)};
}

// --------------------------------------------------------------------------
// Criterion 9: the nonlinear fixed point — geometric convergence, fixed-point
// residual, O(h^2) momentum residual of the converged field, truncation
// stability under doubling n_max.
// --------------------------------------------------------------------------
Outcome criterion_nonlinear_contraction() {
    PhysParams phys;
    phys.alpha = 1.0;
    phys.gamma = 3.0;
    SolverParams sp;
    sp.rho = 2.5;
    sp.n_max = 8;
    sp.r_max = 1e4;
    sp.m_nodes = 1025;
    sp.picard_tol = 1e-12;
    const RadialGrid grid(sp.r_max, sp.m_nodes);
    // Amplitude tuned so the difference history clears the rounding floor for
    // several steps before picard_tol stops the iteration; the contraction is
    // so strong (ratio ~5e-3 per step) that smaller forcings leave too few
    // points to fit a line through.
    const double amp = 2e-1;
    const double mu = 2.0 * sp.rho - 1.0;  // = 4
    const FieldExpansion f = pair_forcing(grid, 1, amp, mu);

    const FullSolution sol = solve_ns(f, phys, sp);
    if (!sol.converged) return {false, "Picard iteration did not converge"};

    // Geometric tail: log-linear fit of the difference history, skipping the
    // leading pre-asymptotic entry and anything at the rounding floor. The
    // gate is the normalized regression residual: the line must explain all
    // but 10% of the observed decay. (The absolute log residual is reported
    // too; it carries the +/-25% per-step wobble of the oscillatory
    // contraction eigenvalue that any alpha != 0 run exhibits.)
    std::vector<double> tail;
    for (size_t k = 1; k < sol.picard.diff_history.size(); ++k) {
        if (sol.picard.diff_history[k] > 1e-14) tail.push_back(sol.picard.diff_history[k]);
    }
    if (tail.size() < 4) {
        return {false, strf("only %zu usable contraction steps; cannot certify the "
                            "geometric tail",
                            tail.size())};
    }
    const auto [ratio, fit_rms, fit_rel] = loglinear_ratio(tail);

    // Fixed-point residual in the solution-space norm: re-apply the map
    // v -> L(f + N(v)) once, feeding N the solver's analytically-computed
    // per-mode vorticities (a finite-difference rot of the stored profiles
    // would inject O(h^2) noise far above picard_tol).
    const FieldExpansion v = sol.velocity();
    std::map<int, ModeScalar> exact_rots;
    for (const auto& [n, ms] : sol.modes) exact_rots.emplace(n, ms.vorticity);
    const FieldExpansion nv = nonlinear_term(v, exact_rots, sp.n_max);
    FieldExpansion g = f;
    for (int n : nv.mode_numbers()) {
        ModeVector acc = nv.mode(n);
        const auto fm = g.mode_numbers();
        if (std::count(fm.begin(), fm.end(), n) > 0) {
            const ModeVector& b = g.mode(n);
            for (int i = 0; i < grid.size(); ++i) {
                acc.vr[i] += b.vr[i];
                acc.vtheta[i] += b.vtheta[i];
            }
        }
        g.set_mode(std::move(acc));
    }
    const FieldExpansion tv = solve_linear(g, phys, sp).velocity();
    FieldExpansion diff(grid);
    for (int n : tv.mode_numbers()) {
        ModeVector d = tv.mode(n);
        const auto mns = v.mode_numbers();
        if (std::count(mns.begin(), mns.end(), n) > 0) {
            const ModeVector& b = v.mode(n);
            for (int i = 0; i < grid.size(); ++i) {
                d.vr[i] -= b.vr[i];
                d.vtheta[i] -= b.vtheta[i];
            }
        }
        diff.set_mode(std::move(d));
    }
    const double fp_residual = xrho_norm(diff, sp.rho);

    // Momentum residual of the converged total field, differentiated with
    // three stencil widths; both refinement steps must be second order.
    const FieldExpansion total = sol.total_velocity();
    std::map<int, ModeVector> umodes, gpmodes = pressure_gradient_modes(sol);
    for (int n : total.mode_numbers()) umodes.emplace(n, total.mode(n));
    const FieldSampler u = spline_field_sampler(grid, umodes);
    const FieldSampler gp = spline_field_sampler(grid, gpmodes);
    const FieldSampler fs = [amp, mu](double r, double theta) {
        const double ft = amp * std::pow(r, -mu) * std::cos(theta);
        return std::array<double, 2>{-ft * std::sin(theta), ft * std::cos(theta)};
    };
    const auto pts = halton_points(48, 2.0, 20.0);
    std::array<double, 3> res{};
    int idx = 0;
    for (double h : {0.08, 0.04, 0.02}) {
        res[idx++] = ns_residual(u, gp, fs, h, pts).max_residual;
    }
    const double ord1 = fit_order(res[0], res[1]);
    const double ord2 = fit_order(res[1], res[2]);

    // Galerkin stability: doubling the angular truncation moves the norm by
    // less than a percent.
    SolverParams sp2 = sp;
    sp2.n_max = 16;
    const FullSolution sol2 = solve_ns(f, phys, sp2);
    const double norm1 = xrho_norm(v, sp.rho);
    const double norm2 = xrho_norm(sol2.velocity(), sp.rho);
    const double drift = std::abs(norm2 - norm1) / norm1;

    const bool ok = ratio < 1.0 && fit_rel <= 0.10 && fp_residual <= 2.0 * sp.picard_tol
                    && ord1 >= 1.8 && ord2 >= 1.8 && drift < 0.01;
    return {ok, strf("ratio %.3g < 1 (fit residual %.1f%% <= 10%%, log rms %.2f, %zu "
                     "steps), fp residual %.3g <= 2e-12, NS residual orders %.2f/%.2f >= "
                     "1.8, n_max drift %.3g < 1%%",
                     ratio, 100.0 * fit_rel, fit_rms, tail.size(), fp_residual, ord1, ord2,
                     drift)};
}

// --------------------------------------------------------------------------
// Criterion 10: randomized sweeps of both analytic integral-bound checkers.
// --------------------------------------------------------------------------
Outcome criterion_integral_bounds() {
    std::mt19937 rng(31337u);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int samples = 1000;

    int kernel_failures = 0, log_rows = 0;
    for (int sidx = 0; sidx < samples; ++sidx) {
        double gamma = 2.05 + 7.95 * uni(rng);
        double rho;
        int n;
        if (sidx % 20 == 0) {
            // Force the exact logarithmic identity sub-case.
            gamma = std::max(gamma, 3.0);
            rho = 3.0;
            n = (uni(rng) < 0.5) ? -1 : 1;
        } else {
            rho = 2.02 + (std::min(gamma, 3.0) - 2.02) * uni(rng);
            const int mag = 1 + static_cast<int>(uni(rng) * 64.0);
            n = (uni(rng) < 0.5) ? -mag : mag;
        }
        const double alpha = (uni(rng) - 0.5) * 200.0;
        std::vector<double> rs;
        for (int j = 0; j < 3; ++j) rs.push_back(1.01 + 499.0 * uni(rng) * uni(rng));
        const VerificationReport rep = check_kernel_integral_bounds(n, alpha, gamma, rho, rs);
        kernel_failures += rep.failures();
        for (const auto& c : rep.checks) log_rows += c.name == "kernel_bound_log_equality";
    }

    const RadialGrid grid(1e3, 257);
    int forcing_failures = 0;
    for (int sidx = 0; sidx < samples; ++sidx) {
        const int n_mag = 1 + static_cast<int>(uni(rng) * 16.0);
        const int n = (uni(rng) < 0.5) ? -n_mag : n_mag;
        const double gamma = 2.05 + 5.95 * uni(rng);
        const double alpha = (uni(rng) - 0.5) * 100.0;
        ModeVector fm;
        fm.n = n;
        fm.vr.resize(grid.size());
        fm.vtheta.resize(grid.size());
        const cplx cr(uni(rng) - 0.5, uni(rng) - 0.5);
        const cplx ct(uni(rng) - 0.5, uni(rng) - 0.5);
        const double m1 = 2.2 + 2.8 * uni(rng), m2 = 2.2 + 2.8 * uni(rng);
        for (int i = 0; i < grid.size(); ++i) {
            fm.vr[i] = cr * std::pow(grid.r(i), -m1);
            fm.vtheta[i] = ct * std::pow(grid.r(i), -m2);
        }
        std::vector<double> rs;
        for (int j = 0; j < 3; ++j) rs.push_back(1.05 + 400.0 * uni(rng) * uni(rng));
        PhysParams phys;
        phys.alpha = alpha;
        phys.gamma = gamma;
        forcing_failures += check_forcing_integral_bounds(n, alpha, gamma, fm, grid, rs)
                                .failures();
    }

    const bool ok = kernel_failures == 0 && forcing_failures == 0 && log_rows >= 50;
    return {ok, strf("kernel bounds: %d/%d samples clean (%d log-identity rows); forcing "
                     "bounds: %d/%d clean",
                     samples - kernel_failures, samples, log_rows,
                     samples - forcing_failures, samples)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria = {
        {"explicit-family residual", 10.0, criterion_family_residual},
        {"zero-mode closed form", 1.0, criterion_zero_mode},
        {"indicial-root algebra", 1.0, criterion_kernel_algebra},
        {"velocity-reconstruction invariants", 10.0, criterion_biot_savart},
        {"boundary calibration", 30.0, criterion_calibration},
        {"dense-oracle equivalence", 120.0, criterion_oracle_equivalence},
        {"far-field decay rates", 30.0, criterion_decay_rates},
        {"product-norm inequality", 10.0, criterion_product_inequality},
        {"nonlinear contraction", 120.0, criterion_nonlinear_contraction},
        {"integral-bound sweeps", 30.0, criterion_integral_bounds},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].fn();
        } catch (const std::exception& e) {
            out = {false, strf("exception: %s", e.what())};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_budget = secs < criteria[i].budget_s;
        const bool ok = out.ok && in_budget;
        failures += !ok;
        std::printf("criterion %2zu [%s] %-36s %s | %.2fs %s %.0fs\n", i + 1,
                    ok ? "PASS" : "FAIL", criteria[i].name, out.detail.c_str(), secs,
                    in_budget ? "<" : ">=", criteria[i].budget_s);
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
