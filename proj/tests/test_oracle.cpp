// Tests for the independent verification paths: the explicit solution
// family, residual evaluation, the dense mode re-solve, the integral-bound
// checkers and the suite runner.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "diskflow/errors.hpp"
#include "diskflow/fields.hpp"
#include "diskflow/kernels.hpp"
#include "diskflow/linear_solver.hpp"
#include "diskflow/oracle.hpp"

using namespace diskflow;

namespace {

ModeVector swirl_mode(const RadialGrid& grid, int n, double amp, double mu) {
    ModeVector mv;
    mv.n = n;
    mv.vr.assign(grid.size(), cplx(0.0));
    mv.vtheta.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        mv.vtheta[i] = amp * std::pow(grid.r(i), -mu);
    }
    return mv;
}

}  // namespace

TEST_CASE("explicit family has the advertised polar components") {
    HamelParams hp;
    hp.alpha = 1.0;
    hp.gamma = 3.0;
    hp.t = 1.0;

    // u_r = -gamma/r, u_th = alpha/r + t*(1 - r^{2-gamma})/((gamma-2) r).
    const double r = 2.0;
    const double ur = -hp.gamma / r;
    const double at = (1.0 - std::pow(r, 2.0 - hp.gamma)) / ((hp.gamma - 2.0) * r);
    CHECK(at == doctest::Approx(0.25).epsilon(1e-15));
    const double ut = hp.alpha / r + hp.t * at;

    const auto u0 = hamel_velocity(hp, r, 0.0);  // theta = 0: (u_r, u_th)
    CHECK(u0[0] == doctest::Approx(ur).epsilon(1e-14));
    CHECK(u0[1] == doctest::Approx(ut).epsilon(1e-14));

    const double th = 1.234;  // generic angle: rotate the polar frame
    const auto u1 = hamel_velocity(hp, r, th);
    CHECK(u1[0] == doctest::Approx(ur * std::cos(th) - ut * std::sin(th)).epsilon(1e-13));
    CHECK(u1[1] == doctest::Approx(ur * std::sin(th) + ut * std::cos(th)).epsilon(1e-13));

    // The t-profile vanishes on the boundary circle: every family member
    // shares the background boundary data.
    const auto ub = hamel_velocity(hp, 1.0, 0.0);
    CHECK(ub[0] == doctest::Approx(-hp.gamma).epsilon(1e-15));
    CHECK(ub[1] == doctest::Approx(hp.alpha).epsilon(1e-15));
}

TEST_CASE("pressure gradient is radial; t=0 reduces to the background") {
    HamelParams hp;
    hp.alpha = 2.0;
    hp.gamma = 4.0;
    hp.t = 0.0;
    // Pure background: p = -(alpha^2 + gamma^2)/(2 r^2).
    for (double r : {1.0, 1.7, 5.0, 40.0}) {
        const auto g = hamel_pressure_gradient(hp, r);
        const double want = (hp.alpha * hp.alpha + hp.gamma * hp.gamma) / (r * r * r);
        CHECK(g[0] == doctest::Approx(want).epsilon(1e-13));
        CHECK(g[1] == 0.0);
    }
    // With t != 0 the gradient is still purely radial.
    hp.t = 1.0;
    CHECK(hamel_pressure_gradient(hp, 3.0)[1] == 0.0);
}

TEST_CASE("family solves the momentum equation: residual is second order") {
    HamelParams hp;
    hp.alpha = 1.0;
    hp.gamma = 2.5;
    hp.t = 1.0;
    const FieldSampler u = hamel_velocity_sampler(hp);
    const FieldSampler gp = hamel_pressure_gradient_sampler(hp);
    const FieldSampler f = zero_sampler();
    const auto pts = halton_points(80, 1.5, 12.0);

    const ResidualReport r1 = ns_residual(u, gp, f, 2e-3, pts);
    const ResidualReport r2 = ns_residual(u, gp, f, 1e-3, pts);
    REQUIRE(r1.evaluated == 80);
    REQUIRE(r2.evaluated == 80);
    CHECK(r2.max_residual < 1e-6);
    const double order = std::log2(r1.max_residual / r2.max_residual);
    CHECK(order >= 1.8);
    CHECK(order <= 2.3);
}

TEST_CASE("residual evaluator skips points hugging the boundary") {
    const FieldSampler z = zero_sampler();
    std::vector<std::array<double, 2>> pts = {{1.0015, 0.3}, {3.0, 1.0}, {1.5, 2.0}};
    const ResidualReport rep = ns_residual(z, z, z, 1e-3, pts);
    CHECK(rep.skipped == 1);
    CHECK(rep.evaluated == 2);
    CHECK(rep.max_residual == 0.0);

    // Nonzero forcing with zero velocity and pressure leaves |f| itself.
    const FieldSampler fs = [](double, double) { return std::array<double, 2>{3.0, 4.0}; };
    const ResidualReport rf = ns_residual(z, z, fs, 1e-3, {{2.0, 0.0}});
    CHECK(rf.max_residual == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("halton points are deterministic and fill the window") {
    const auto a = halton_points(200, 2.0, 8.0);
    const auto b = halton_points(200, 2.0, 8.0);
    REQUIRE(a.size() == 200);
    CHECK(a == b);
    std::set<double> radii;
    bool lower_third = false, upper_third = false;
    for (const auto& p : a) {
        CHECK(p[0] >= 2.0);
        CHECK(p[0] < 8.0);
        CHECK(p[1] >= 0.0);
        CHECK(p[1] < 2.0 * 3.14159265358979324);
        radii.insert(p[0]);
        lower_third = lower_third || p[0] < 4.0;
        upper_third = upper_third || p[0] > 6.0;
    }
    CHECK(radii.size() == 200);  // no collisions
    CHECK(lower_third);
    CHECK(upper_third);
}

TEST_CASE("spline sampler reproduces smooth mode sets") {
    const RadialGrid grid(1e3, 513);
    std::map<int, ModeVector> modes;
    const cplx a(0.4, -0.2), b(0.9, 0.3);
    ModeVector mv;
    mv.n = 2;
    mv.vr.resize(grid.size());
    mv.vtheta.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        mv.vr[i] = a * std::pow(grid.r(i), -2.0);
        mv.vtheta[i] = b * std::pow(grid.r(i), -2.0);
    }
    modes.emplace(2, mv);

    FieldExpansion e(grid);
    e.set_mode(mv);
    const FieldSampler s = spline_field_sampler(grid, modes);

    // Exact at the nodes (the spline interpolates), close between them.
    for (int i : {0, 17, 101, 400, grid.size() - 1}) {
        const double r = grid.r(i);
        for (double th : {0.0, 0.9, 4.0}) {
            const auto got = s(r, th);
            const auto want = synthesize(e, r, th);
            CHECK(got[0] == doctest::Approx(want[0]).epsilon(1e-12).scale(1.0));
            CHECK(got[1] == doctest::Approx(want[1]).epsilon(1e-12).scale(1.0));
        }
    }
    for (double r : {1.013, 2.71, 99.5, 640.0}) {
        const double th = 0.7;
        const auto got = s(r, th);
        // Reference: the exact power-law mode, synthesized directly.
        const cplx phase = std::polar(1.0, 2.0 * th);
        const cplx vr = a * std::pow(r, -2.0) * phase;
        const cplx vt = b * std::pow(r, -2.0) * phase;
        const double ex = std::real(vr) * std::cos(th) - std::real(vt) * std::sin(th);
        const double ey = std::real(vr) * std::sin(th) + std::real(vt) * std::cos(th);
        // natural-spline end conditions limit the first interval to ~1e-5
        CHECK(got[0] == doctest::Approx(ex).epsilon(1e-5).scale(0.1));
        CHECK(got[1] == doctest::Approx(ey).epsilon(1e-5).scale(0.1));
    }
}

TEST_CASE("dense re-solve: zero forcing gives the zero mode") {
    const RadialGrid grid(1e3, 257);
    PhysParams phys;
    phys.alpha = 1.0;
    phys.gamma = 3.0;
    ModeVector f;
    f.n = 2;
    f.vr.assign(grid.size(), cplx(0.0));
    f.vtheta.assign(grid.size(), cplx(0.0));
    const ModeScalar w = dense_bvp_mode(2, f, phys, grid);
    double sup = 0.0;
    for (const cplx& x : w.values) sup = std::max(sup, std::abs(x));
    CHECK(sup <= 1e-12);
}

TEST_CASE("dense re-solve agrees with the spectral mode solver") {
    const RadialGrid grid(1e4, 1025);
    PhysParams phys;
    phys.alpha = 1.0;
    phys.gamma = 3.0;
    const int n = 1;
    const ModeVector f = swirl_mode(grid, n, 1.0, 3.5);
    const ModeKernelData k = compute_kernel_data(n, phys);
    const LinearModeSolution spectral = solve_mode_nonzero(f, k, grid, 1e-8);
    const ModeScalar dense = dense_bvp_mode(n, f, phys, grid);

    double sup = 0.0, err = 0.0;
    const double r_hi = grid.r_max() / 10.0;
    for (int i = 0; i < grid.size() && grid.r(i) <= r_hi; ++i) {
        sup = std::max(sup, std::abs(spectral.vorticity.values[i]));
        err = std::max(err, std::abs(spectral.vorticity.values[i] - dense.values[i]));
    }
    CHECK(sup > 0.0);
    CHECK(err <= 1e-3 * sup);

    // Conjugating the data conjugates the dense solution.
    ModeVector fc = f;
    for (auto& x : fc.vr) x = std::conj(x);
    for (auto& x : fc.vtheta) x = std::conj(x);
    fc.n = -n;
    const ModeScalar dense_m = dense_bvp_mode(-n, fc, phys, grid);
    double cerr = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        cerr = std::max(cerr, std::abs(dense_m.values[i] - std::conj(dense.values[i])));
    }
    CHECK(cerr <= 1e-13 * std::max(sup, 1.0));
}

TEST_CASE("kernel integral bounds hold on representative parameters") {
    const std::vector<double> rs = {1.5, 3.0, 10.0, 100.0};
    const VerificationReport rep = check_kernel_integral_bounds(2, 1.0, 3.0, 2.5, rs);
    CHECK(rep.all_ok());
    CHECK(rep.failures() == 0);
    std::set<std::string> names;
    for (const auto& c : rep.checks) {
        names.insert(c.name);
        CHECK(c.margin >= 0.0);
    }
    CHECK(names.count("kernel_bound_fast_inner") == 1);
    CHECK(names.count("kernel_bound_fast_outer") == 1);
    CHECK(names.count("kernel_bound_slow_inner") == 1);
    CHECK(names.count("kernel_bound_slow_outer") == 1);

    // rho = 3, |n| = 1: the slow inner bound degenerates to an exact
    // logarithmic identity.
    const VerificationReport log_rep = check_kernel_integral_bounds(1, 0.5, 4.0, 3.0, rs);
    CHECK(log_rep.all_ok());
    bool saw_log = false;
    for (const auto& c : log_rep.checks) saw_log = saw_log || c.name == "kernel_bound_log_equality";
    CHECK(saw_log);
}

TEST_CASE("forcing integral bounds hold for a power-law profile") {
    const RadialGrid grid(1e3, 257);
    const ModeVector f = swirl_mode(grid, 2, 1.0, 3.0);
    const VerificationReport rep =
        check_forcing_integral_bounds(2, 1.0, 3.0, f, grid, {2.0, 10.0, 50.0});
    CHECK(rep.all_ok());
    bool saw_in = false, saw_out = false;
    for (const auto& c : rep.checks) {
        CHECK(c.margin >= 0.0);
        saw_in = saw_in || c.name == "forcing_bound_inner";
        saw_out = saw_out || c.name == "forcing_bound_outer";
    }
    CHECK(saw_in);
    CHECK(saw_out);
}

TEST_CASE("report container aggregates and formats") {
    VerificationReport rep;
    rep.add("alpha_check", "n=1", 0.5, true);
    rep.add("beta_check", "n=2", -0.1, false);
    CHECK(!rep.all_ok());
    CHECK(rep.failures() == 1);

    VerificationReport other;
    other.add("gamma_check", "", 1.0, true);
    rep.merge(other);
    CHECK(rep.checks.size() == 3);
    CHECK(rep.failures() == 1);

    const std::string txt = rep.to_text();
    CHECK(txt.find("alpha_check") != std::string::npos);
    CHECK(txt.find("beta_check") != std::string::npos);
    CHECK(txt.find("gamma_check") != std::string::npos);
    CHECK(txt.find("FAIL") != std::string::npos);
}

TEST_CASE("quick verification suite is green end to end") {
    const VerificationReport rep = run_verification_suite(true);
    CHECK(rep.all_ok());
    CHECK(rep.checks.size() >= 20);
    const std::string txt = rep.to_text();
    CHECK(txt.find("FAIL") == std::string::npos);
    // Every major section contributes at least one row.
    for (const char* name :
         {"family_residual", "indicial_bounds", "swirl_closed_form",
          "mode_cross_solve", "compatibility_residual", "no_slip_residual",
          "vorticity_decay_slope", "velocity_decay_slope", "product_norm_inequality"}) {
        bool found = false;
        for (const auto& c : rep.checks) found = found || c.name == name;
        CHECK_MESSAGE(found, name);
    }
}
