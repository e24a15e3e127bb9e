#include "diskflow/biot_savart.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "diskflow/errors.hpp"
#include "diskflow/quadrature.hpp"

namespace diskflow {

namespace {

void require_nonzero_mode(int n, const char* where) {
    if (n == 0) {
        throw ConfigError(std::string(where) +
                          ": mode n = 0 has no stream-function representation; "
                          "use the zero-mode solver instead");
    }
    if (n == std::numeric_limits<int>::min()) {
        throw ConfigError(std::string(where) + ": mode number out of range");
    }
}

void require_grid_match(const ModeScalar& omega, const RadialGrid& grid,
                        const char* where) {
    if (static_cast<int>(omega.values.size()) != grid.size()) {
        throw ConfigError(std::string(where) + ": vorticity sample count " +
                          std::to_string(omega.values.size()) +
                          " does not match grid size " +
                          std::to_string(grid.size()));
    }
}

} // namespace

cplx d_n_functional(const ModeScalar& omega, const RadialGrid& grid) {
    require_nonzero_mode(omega.n, "d_n_functional");
    require_grid_match(omega, grid, "d_n_functional");
    const double a = -std::abs(omega.n) + 1.0;
    return quad::total_weighted(grid, omega.values, a);
}

StreamMode streamfunction(const ModeScalar& omega, const RadialGrid& grid) {
    require_nonzero_mode(omega.n, "streamfunction");
    require_grid_match(omega, grid, "streamfunction");
    const double an = std::abs(omega.n);

    // r^{-|n|} Int_1^r s^{|n|+1} omega ds  and  r^{|n|} Int_r^inf s^{-|n|+1} omega ds.
    std::vector<cplx> inner =
        quad::inner_weighted(grid, omega.values, an + 1.0, cplx(an, 0.0));
    std::vector<cplx> outer =
        quad::outer_weighted(grid, omega.values, -an + 1.0, cplx(an, 0.0));

    StreamMode out;
    out.n = omega.n;
    // outer[0] carries r(0)^{|n|} = 1, so it IS the boundary functional; using
    // the same array element for d_n makes psi(1) vanish exactly.
    out.d_n = outer[0];
    out.psi.resize(outer.size());
    const double scale = 1.0 / (2.0 * an);
    for (int i = 0; i < grid.size(); ++i) {
        const double damp = std::pow(grid.r(i), -an);
        out.psi[i] = scale * (-out.d_n * damp + inner[i] + outer[i]);
    }
    return out;
}

ModeVector biot_savart(const ModeScalar& omega, const RadialGrid& grid) {
    require_nonzero_mode(omega.n, "biot_savart");
    require_grid_match(omega, grid, "biot_savart");
    const double an = std::abs(omega.n);

    // Stream-function pieces, re-weighted for psi/r and psi' without any
    // finite differencing:
    //   r^{-|n|-1} Int_1^r s^{|n|+1} omega ds,  r^{|n|-1} Int_r^inf s^{-|n|+1} omega ds.
    std::vector<cplx> inner =
        quad::inner_weighted(grid, omega.values, an + 1.0, cplx(an + 1.0, 0.0));
    std::vector<cplx> outer =
        quad::outer_weighted(grid, omega.values, -an + 1.0, cplx(an - 1.0, 0.0));
    // outer[0] carries r(0)^{|n|-1} = 1, so it IS the boundary functional;
    // reusing the same array element keeps V_r(1) = 0 and V_th(1) = -d_n
    // exact in floating point, not just in exact arithmetic.
    const cplx d_n = outer[0];

    ModeVector v;
    v.n = omega.n;
    v.vr.resize(inner.size());
    v.vtheta.resize(inner.size());
    const cplx i_n(0.0, static_cast<double>(omega.n));
    for (int i = 0; i < grid.size(); ++i) {
        const double damp = std::pow(grid.r(i), -an - 1.0);
        const cplx psi_over_r =
            (1.0 / (2.0 * an)) * (-d_n * damp + inner[i] + outer[i]);
        v.vr[i] = i_n * psi_over_r;
        v.vtheta[i] = -0.5 * d_n * damp + 0.5 * inner[i] - 0.5 * outer[i];
    }
    return v;
}

} // namespace diskflow
