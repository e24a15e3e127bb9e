#include "diskflow/nonlinear_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <utility>

#include <json.hpp>

#include "diskflow/errors.hpp"

namespace diskflow {

namespace {

template <typename... Args>
std::string strf(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return std::string(buf);
}

// a + b restricted to modes |n| <= n_max_keep, on a's grid.
FieldExpansion add_expansions(const FieldExpansion& a, const FieldExpansion& b,
                              int n_max_keep) {
    if (!a.grid().compatible_with(b.grid())) {
        throw ConfigError("expansion sum: operand grids differ");
    }
    FieldExpansion out(a.grid());
    for (int n : a.mode_numbers()) {
        if (std::abs(n) <= n_max_keep) out.set_mode(a.mode(n));
    }
    for (int n : b.mode_numbers()) {
        if (std::abs(n) > n_max_keep) continue;
        const ModeVector& mv = b.mode(n);
        ModeVector& acc = out.ensure_mode(n);
        for (size_t i = 0; i < acc.vr.size(); ++i) {
            acc.vr[i] += mv.vr[i];
            acc.vtheta[i] += mv.vtheta[i];
        }
    }
    return out;
}

// X-norm of the difference of two sparse mode-solution sets (missing modes
// count as zero), with the same analytic-derivative gradient magnitude the
// per-mode reports use.
double xnorm_between(const std::map<int, LinearModeSolution>& a,
                     const std::map<int, LinearModeSolution>& b, double rho,
                     const RadialGrid& grid) {
    std::set<int> keys;
    for (const auto& [n, s] : a) keys.insert(n);
    for (const auto& [n, s] : b) keys.insert(n);
    double sum = 0.0;
    const int m = grid.size();
    for (int n : keys) {
        const auto ia = a.find(n);
        const auto ib = b.find(n);
        const LinearModeSolution* pa = (ia == a.end()) ? nullptr : &ia->second;
        const LinearModeSolution* pb = (ib == b.end()) ? nullptr : &ib->second;
        const cplx in(0.0, static_cast<double>(n));
        double sup_v = 0.0, sup_g = 0.0;
        for (int i = 0; i < m; ++i) {
            const double r = grid.r(i);
            const cplx dvr = (pa ? pa->velocity.vr[i] : cplx(0.0))
                             - (pb ? pb->velocity.vr[i] : cplx(0.0));
            const cplx dvt = (pa ? pa->velocity.vtheta[i] : cplx(0.0))
                             - (pb ? pb->velocity.vtheta[i] : cplx(0.0));
            const cplx ddr = (pa ? pa->velocity_dr.vr[i] : cplx(0.0))
                             - (pb ? pb->velocity_dr.vr[i] : cplx(0.0));
            const cplx ddt = (pa ? pa->velocity_dr.vtheta[i] : cplx(0.0))
                             - (pb ? pb->velocity_dr.vtheta[i] : cplx(0.0));
            const double mag = std::hypot(std::abs(dvr), std::abs(dvt));
            const double ang = std::norm(in * dvr - dvt) + std::norm(dvr + in * dvt);
            const double gmag = std::sqrt(std::norm(ddr) + std::norm(ddt) + ang / (r * r));
            sup_v = std::max(sup_v, std::pow(r, rho - 1.0) * mag);
            sup_g = std::max(sup_g, std::pow(r, rho) * gmag);
        }
        sum += sup_v + sup_g;
    }
    return sum;
}

}  // namespace

// ---------------------------------------------------------------------------
// Nonlinear term
// ---------------------------------------------------------------------------

FieldExpansion nonlinear_term(const FieldExpansion& w,
                              const std::map<int, ModeScalar>& rot_w, int n_max_out) {
    if (n_max_out < 0) throw ConfigError("nonlinear_term: n_max_out must be >= 0");
    const RadialGrid& grid = w.grid();
    FieldExpansion out(grid);
    const std::vector<int> mns = w.mode_numbers();
    if (mns.empty()) return out;
    const int m = grid.size();
    for (int n : mns) {
        const auto it = rot_w.find(n);
        if (it == rot_w.end()) {
            throw ConfigError(strf("nonlinear_term: missing vorticity profile for mode n=%d", n));
        }
        if (static_cast<int>(it->second.values.size()) != m) {
            throw ConfigError(strf("nonlinear_term: vorticity profile length mismatch at n=%d", n));
        }
    }
    // (-w^perp rot w)_n = sum_{m1+m2=n} (w_th,m1 * omega_m2, -w_r,m1 * omega_m2)
    for (int n1 : mns) {
        const ModeVector& vm = w.mode(n1);
        for (int n2 : mns) {
            const int n = n1 + n2;
            if (std::abs(n) > n_max_out) continue;
            const std::vector<cplx>& om = rot_w.at(n2).values;
            ModeVector& acc = out.ensure_mode(n);
            for (int i = 0; i < m; ++i) {
                acc.vr[i] += vm.vtheta[i] * om[i];
                acc.vtheta[i] -= vm.vr[i] * om[i];
            }
        }
    }
    return out;
}

FieldExpansion nonlinear_term(const FieldExpansion& w, int n_max_out) {
    std::map<int, ModeScalar> rots;
    for (int n : w.mode_numbers()) rots.emplace(n, rot_mode(w.mode(n), w.grid()));
    return nonlinear_term(w, rots, n_max_out);
}

// ---------------------------------------------------------------------------
// Picard iteration
// ---------------------------------------------------------------------------

FieldExpansion picard_map(const FieldExpansion& w, const FieldExpansion& f,
                          const PhysParams& phys, const SolverParams& solver) {
    if (!w.grid().compatible_with(f.grid())) {
        throw ConfigError("picard_map: iterate and forcing grids differ");
    }
    const FieldExpansion g =
        add_expansions(f, nonlinear_term(w, solver.n_max), solver.n_max);
    return solve_linear(g, phys, solver).velocity();
}

FullSolution solve_ns(const FieldExpansion& f, const PhysParams& phys,
                      const SolverParams& solver) {
    phys.validate();
    solver.validate(phys, /*nonlinear=*/true);
    const RadialGrid& grid = f.grid();
    if (grid.size() < 2) throw ConfigError("solve_ns: forcing expansion carries no grid");
    for (int n : f.mode_numbers()) {
        if (std::abs(n) > solver.n_max) {
            throw ConfigError(strf("solve_ns: forcing mode n=%d exceeds the truncation n_max=%d",
                                   n, solver.n_max));
        }
    }

    FullSolution out;
    out.phys = phys;
    out.solver = solver;
    out.grid = grid;
    out.kappa_bound = kappa(phys, solver.rho, solver.c0);
    out.forcing_norm = l1_weighted_norm(f, 2.0 * solver.rho - 1.0);
    if (2.0 * out.kappa_bound * solver.delta >= 1.0) {
        out.warnings.push_back(strf("contraction not certified: 2*kappa*delta = %.6g >= 1",
                                    2.0 * out.kappa_bound * solver.delta));
    }
    if (out.forcing_norm > solver.delta * solver.delta) {
        out.warnings.push_back(strf(
            "forcing norm %.6g exceeds the certified ball delta^2 = %.6g",
            out.forcing_norm, solver.delta * solver.delta));
    }
    out.certified = out.warnings.empty();

    std::map<int, LinearModeSolution> cur;
    double prev_diff = -1.0;
    for (int k = 0; k < solver.picard_max_iter; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        FieldExpansion g = f;
        if (!cur.empty()) {
            FieldExpansion w(grid);
            std::map<int, ModeScalar> rots;
            for (const auto& [n, s] : cur) {
                w.set_mode(s.velocity);
                rots.emplace(n, s.vorticity);
            }
            g = add_expansions(f, nonlinear_term(w, rots, solver.n_max), solver.n_max);
        }
        SolveReport rep;
        LinearSolution lin = solve_linear(g, phys, solver, &rep);
        const double norm = rep.l1_v + rep.l1_grad;
        const double diff = xnorm_between(lin.modes, cur, solver.rho, grid);
        const auto t1 = std::chrono::steady_clock::now();
        out.picard.norm_history.push_back(norm);
        out.picard.diff_history.push_back(diff);
        out.picard.wall_ms.push_back(
            std::chrono::duration<double, std::milli>(t1 - t0).count());
        if (prev_diff > 0.0) out.picard.contraction_ratios.push_back(diff / prev_diff);
        prev_diff = diff;
        cur = std::move(lin.modes);
        out.report = rep;
        out.picard.iterations = k + 1;
        if (diff <= solver.picard_tol) {
            out.converged = true;
            break;
        }
    }
    out.modes = std::move(cur);
    return out;
}

// ---------------------------------------------------------------------------
// Solution views
// ---------------------------------------------------------------------------

FieldExpansion FullSolution::velocity() const {
    FieldExpansion e(grid);
    for (const auto& [n, s] : modes) e.set_mode(s.velocity);
    return e;
}

FieldExpansion FullSolution::total_velocity() const {
    FieldExpansion e = velocity();
    const ModeVector b = background_mode(phys, grid);
    ModeVector& m0 = e.ensure_mode(0);
    for (int i = 0; i < grid.size(); ++i) {
        m0.vr[i] += b.vr[i];
        m0.vtheta[i] += b.vtheta[i];
    }
    return e;
}

// ---------------------------------------------------------------------------
// Asymptotics
// ---------------------------------------------------------------------------

AsymptoticsReport asymptotics_report(const FullSolution& sol) {
    AsymptoticsReport rep;
    const RadialGrid& grid = sol.grid;
    rep.r_lo = 10.0;
    rep.r_hi = grid.r_max() / 10.0;
    if (rep.r_hi <= 1.5 * rep.r_lo) {
        rep.r_lo = std::pow(grid.r_max(), 0.25);
        rep.r_hi = std::pow(grid.r_max(), 0.75);
    }
    std::vector<double> vmag(grid.size(), 0.0), wmag(grid.size(), 0.0);
    for (const auto& [n, s] : sol.modes) {
        for (int i = 0; i < grid.size(); ++i) {
            vmag[i] += std::hypot(std::abs(s.velocity.vr[i]), std::abs(s.velocity.vtheta[i]));
            wmag[i] += std::abs(s.vorticity.values[i]);
        }
    }
    double peak = 0.0;
    for (double v : vmag) peak = std::max(peak, v);
    if (peak == 0.0) {
        rep.background_only = true;
        return rep;
    }
    rep.velocity_slope = fit_decay_slope(grid, vmag, rep.r_lo, rep.r_hi);
    rep.vorticity_slope = fit_decay_slope(grid, wmag, rep.r_lo, rep.r_hi);
    return rep;
}

std::string AsymptoticsReport::to_text() const {
    if (background_only) {
        return "perturbation vanishes: flow is the explicit background\n";
    }
    std::string out;
    out += strf("fit window: r in [%.6g, %.6g]\n", r_lo, r_hi);
    out += strf("velocity decay slope:  %.6g (rms %.3g, %d nodes)\n", velocity_slope.slope,
                velocity_slope.rms_residual, velocity_slope.n_points);
    out += strf("vorticity decay slope: %.6g (rms %.3g, %d nodes)\n", vorticity_slope.slope,
                vorticity_slope.rms_residual, vorticity_slope.n_points);
    return out;
}

// ---------------------------------------------------------------------------
// Pressure gradient of the full flow
// ---------------------------------------------------------------------------

std::map<int, ModeVector> pressure_gradient_modes(const FullSolution& sol) {
    const RadialGrid& grid = sol.grid;
    if (grid.size() < 2) throw ConfigError("pressure_gradient_modes: solution carries no grid");
    const int m = grid.size();

    // Total velocity modes and analytic radial derivatives; mode 0 includes
    // the background b = (-gamma/r, alpha/r), b' = (gamma/r^2, -alpha/r^2).
    std::map<int, ModeVector> u, du;
    {
        ModeVector b = background_mode(sol.phys, grid);
        ModeVector bd;
        bd.n = 0;
        bd.vr.resize(m);
        bd.vtheta.resize(m);
        for (int i = 0; i < m; ++i) {
            const double r2 = grid.r(i) * grid.r(i);
            bd.vr[i] = sol.phys.gamma / r2;
            bd.vtheta[i] = -sol.phys.alpha / r2;
        }
        u.emplace(0, std::move(b));
        du.emplace(0, std::move(bd));
    }
    for (const auto& [n, s] : sol.modes) {
        ModeVector& un = u.try_emplace(n, ModeVector{n, std::vector<cplx>(m, cplx(0.0)),
                                                     std::vector<cplx>(m, cplx(0.0))})
                             .first->second;
        ModeVector& dn = du.try_emplace(n, ModeVector{n, std::vector<cplx>(m, cplx(0.0)),
                                                      std::vector<cplx>(m, cplx(0.0))})
                             .first->second;
        for (int i = 0; i < m; ++i) {
            un.vr[i] += s.velocity.vr[i];
            un.vtheta[i] += s.velocity.vtheta[i];
            dn.vr[i] += s.velocity_dr.vr[i];
            dn.vtheta[i] += s.velocity_dr.vtheta[i];
        }
    }

    // Mode convolution of |u|^2 and its radial derivative (derivative on the
    // first factor; ordered pairs supply the product rule).
    const int n_keep = 2 * sol.solver.n_max;
    std::map<int, std::vector<cplx>> conv, dconv;
    for (const auto& [n1, u1] : u) {
        for (const auto& [n2, u2] : u) {
            const int n = n1 + n2;
            if (std::abs(n) > n_keep) continue;
            auto& c = conv.try_emplace(n, m, cplx(0.0)).first->second;
            auto& dc = dconv.try_emplace(n, m, cplx(0.0)).first->second;
            const ModeVector& d1 = du.at(n1);
            for (int i = 0; i < m; ++i) {
                c[i] += u1.vr[i] * u2.vr[i] + u1.vtheta[i] * u2.vtheta[i];
                dc[i] += 2.0 * (d1.vr[i] * u2.vr[i] + d1.vtheta[i] * u2.vtheta[i]);
            }
        }
    }

    std::map<int, ModeVector> out;
    std::set<int> keys;
    for (const auto& [n, c] : conv) keys.insert(n);
    for (const auto& [n, s] : sol.modes) keys.insert(n);
    for (int n : keys) {
        ModeVector g;
        g.n = n;
        g.vr.assign(m, cplx(0.0));
        g.vtheta.assign(m, cplx(0.0));
        const cplx in(0.0, static_cast<double>(n));
        const auto ic = conv.find(n);
        const auto idc = dconv.find(n);
        const auto is = sol.modes.find(n);
        for (int i = 0; i < m; ++i) {
            const double r = grid.r(i);
            const cplx c = (ic == conv.end()) ? cplx(0.0) : ic->second[i];
            const cplx dc = (idc == dconv.end()) ? cplx(0.0) : idc->second[i];
            cplx q = 0.0, dq = 0.0;
            if (is != sol.modes.end()) {
                q = is->second.pressure.values[i];
                dq = is->second.pressure_dr.values[i];
            }
            g.vr[i] = -0.5 * dc + dq;
            g.vtheta[i] = (in / r) * (-0.5 * c + q);
        }
        out.emplace(n, std::move(g));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Summaries
// ---------------------------------------------------------------------------

std::string run_summary_json(const FullSolution& sol) {
    nlohmann::json j;
    j["alpha"] = sol.phys.alpha;
    j["gamma"] = sol.phys.gamma;
    j["rho"] = sol.solver.rho;
    j["n_max"] = sol.solver.n_max;
    j["r_max"] = sol.solver.r_max;
    j["m_nodes"] = sol.solver.m_nodes;
    j["quad_tol"] = sol.solver.quad_tol;
    j["picard_tol"] = sol.solver.picard_tol;
    j["picard_max_iter"] = sol.solver.picard_max_iter;
    j["delta"] = sol.solver.delta;
    j["c0"] = sol.solver.c0;
    j["converged"] = sol.converged;
    j["certified"] = sol.certified;
    j["iterations"] = sol.picard.iterations;
    j["kappa"] = sol.kappa_bound;
    j["forcing_norm"] = sol.forcing_norm;
    j["final_norm"] =
        sol.picard.norm_history.empty() ? 0.0 : sol.picard.norm_history.back();
    j["final_diff"] =
        sol.picard.diff_history.empty() ? 0.0 : sol.picard.diff_history.back();
    j["final_ratio"] = sol.picard.contraction_ratios.empty()
                           ? 0.0
                           : sol.picard.contraction_ratios.back();
    double max_dn = 0.0;
    for (const auto& ms : sol.report.modes) max_dn = std::max(max_dn, ms.d_n_abs);
    j["max_abs_d_n"] = max_dn;
    const AsymptoticsReport asym = asymptotics_report(sol);
    j["background_only"] = asym.background_only;
    j["velocity_slope"] = asym.velocity_slope.slope;
    j["vorticity_slope"] = asym.vorticity_slope.slope;
    j["mode_count"] = static_cast<int>(sol.modes.size());
    j["warnings"] = sol.warnings;
    return j.dump(2) + "\n";
}

std::string convergence_log(const FullSolution& sol) {
    std::string out;
    for (size_t k = 0; k < sol.picard.diff_history.size(); ++k) {
        const std::string ratio =
            (k >= 1 && k - 1 < sol.picard.contraction_ratios.size())
                ? strf("%.6f", sol.picard.contraction_ratios[k - 1])
                : std::string("n/a");
        out += strf("iter %2d: norm=%.12e diff=%.12e ratio=%s wall_ms=%.3f\n",
                    static_cast<int>(k + 1), sol.picard.norm_history[k],
                    sol.picard.diff_history[k], ratio.c_str(), sol.picard.wall_ms[k]);
    }
    out += sol.converged
               ? strf("converged after %d iterations\n", sol.picard.iterations)
               : strf("not converged after %d iterations\n", sol.picard.iterations);
    return out;
}

}  // namespace diskflow
