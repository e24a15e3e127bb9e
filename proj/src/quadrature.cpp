#include "diskflow/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace diskflow::quad {

namespace {

// (exp(z h) - 1) / z, stable as z h -> 0.
cplx E0(cplx z, double h) {
    const cplx zh = z * h;
    if (std::abs(zh) < 1e-3) {
        // h * (1 + zh/2 + zh^2/6 + zh^3/24 + zh^4/120)
        return h * (1.0 + zh * (0.5 + zh * (1.0 / 6.0 + zh * (1.0 / 24.0 + zh / 120.0))));
    }
    return (std::exp(zh) - 1.0) / z;
}

// Int_0^h tau e^{z tau} dtau, stable as z h -> 0.
cplx E1(cplx z, double h) {
    const cplx zh = z * h;
    if (std::abs(zh) < 1e-3) {
        // h^2 * (1/2 + zh/3 + zh^2/8 + zh^3/30 + zh^4/144)
        return h * h *
               (0.5 + zh * (1.0 / 3.0 + zh * (1.0 / 8.0 + zh * (1.0 / 30.0 + zh / 144.0))));
    }
    return (h * std::exp(zh) - E0(z, h)) / z;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

constexpr double kTailMargin = 0.05;

void check_exponent_budget(const RadialGrid& grid, cplx combined) {
    // the only exponent ever materialised; keep exp() well inside range
    if (std::abs(combined.real()) * grid.t(grid.size() - 1) > 690.0)
        throw NumericalError("weight/damping exponent combination " + fmt(combined.real()) +
                             " overflows on this grid; pick a damping exponent that "
                             "tracks the weight");
}

} // namespace

cplx interval_integral(cplx g0, cplx g1, cplx b, double h) {
    if (g0 != cplx(0.0) && g1 != cplx(0.0)) {
        const cplx ratio = g1 / g0;
        const double mag = std::abs(ratio);
        if (mag > 0.02 && mag < 50.0 && std::abs(std::arg(ratio)) < 2.0) {
            const cplx mu = std::log(ratio) / h;
            return g0 * E0(b + mu, h);
        }
    }
    return g0 * E0(b, h) + (g1 - g0) / h * E1(b, h);
}

TailFit fit_power_tail(const RadialGrid& grid, const std::vector<cplx>& g) {
    TailFit fit;
    const int m = grid.size();
    if (static_cast<int>(g.size()) != m)
        throw NumericalError("profile length does not match the grid");
    fit.anchor = g.back();

    const double t_lo = grid.t(m - 1) - std::log(10.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    double max_mag = 0.0;
    double phase_sum = 0.0;
    int phase_pairs = 0;
    int prev = -2;
    for (int i = 0; i < m; ++i) {
        if (grid.t(i) < t_lo) continue;
        const double mag = std::abs(g[i]);
        max_mag = std::max(max_mag, mag);
        if (mag < 1e-300) continue;
        const double x = grid.t(i), y = std::log(mag);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
        if (prev == i - 1) {
            phase_sum += std::arg(g[i] / g[i - 1]);
            ++phase_pairs;
        }
        prev = i;
    }
    if (max_mag < 1e-280 || fit.anchor == cplx(0.0)) {
        fit.negligible = true;
        return fit;
    }
    if (k < 3)
        throw NumericalError("tail fit window has fewer than 3 usable nodes; "
                             "grid too coarse for far-field correction");
    const double denom = k * sxx - sx * sx;
    fit.beta = -(k * sxy - sx * sy) / denom;
    if (phase_pairs > 0) fit.phase_slope = phase_sum / (phase_pairs * grid.log_step());
    fit.negligible = false;
    return fit;
}

std::vector<cplx> inner_weighted(const RadialGrid& grid, const std::vector<cplx>& g,
                                 cplx a, cplx c) {
    const int m = grid.size();
    if (static_cast<int>(g.size()) != m)
        throw NumericalError("profile length does not match the grid");
    if (c.real() < 0.0)
        throw NumericalError("inner recurrence needs Re(damping exponent) >= 0");
    const cplx b = a + 1.0;
    check_exponent_budget(grid, b - c);

    const double h = grid.log_step();
    const cplx decay = std::exp(-c * h);
    std::vector<cplx> K(m);
    K[0] = cplx(0.0);
    for (int j = 0; j + 1 < m; ++j) {
        const cplx J = interval_integral(g[j], g[j + 1], b, h);
        const cplx lift = std::exp((b - c) * grid.t(j));
        K[j + 1] = decay * (K[j] + lift * J);
    }
    return K;
}

std::vector<cplx> outer_weighted(const RadialGrid& grid, const std::vector<cplx>& g,
                                 cplx a, cplx c) {
    const int m = grid.size();
    if (static_cast<int>(g.size()) != m)
        throw NumericalError("profile length does not match the grid");
    if (c.real() < 0.0)
        throw NumericalError("outer recurrence needs Re(damping exponent) >= 0");
    const cplx b = a + 1.0;
    check_exponent_budget(grid, b + c);

    const double h = grid.log_step();
    const cplx decay = std::exp(-c * h);
    std::vector<cplx> O(m);

    const TailFit fit = fit_power_tail(grid, g);
    if (fit.negligible) {
        O[m - 1] = cplx(0.0);
    } else {
        if (fit.beta <= a.real() + 1.0 + kTailMargin)
            throw DivergentTailError(
                "far-field integral divergent: fitted tail exponent beta = " + fmt(fit.beta) +
                " does not exceed Re(weight)+1 = " + fmt(a.real() + 1.0) +
                " by the required margin");
        // r_max^c * Int_{r_max}^inf s^a anchor (s/r_max)^{-beta_c} ds
        O[m - 1] = fit.anchor * std::exp((b + c) * grid.t(m - 1)) / (fit.beta_c() - b);
    }
    for (int j = m - 2; j >= 0; --j) {
        const cplx J = interval_integral(g[j], g[j + 1], b, h);
        const cplx lift = std::exp((b + c) * grid.t(j));
        O[j] = decay * O[j + 1] + lift * J;
    }
    return O;
}

cplx total_weighted(const RadialGrid& grid, const std::vector<cplx>& g, cplx a) {
    return outer_weighted(grid, g, a, cplx(0.0)).front();
}

} // namespace diskflow::quad
