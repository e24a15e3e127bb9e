#pragma once
// Mode-wise velocity recovery from vorticity on the exterior domain.
//
// For mode n != 0 the stream function solves
//   -psi'' - psi'/r + n^2 psi / r^2 = omega_n,   psi(1) = 0, decay at infinity,
// and is given by
//   psi_n(r) = (1/(2|n|)) [ -d_n r^{-|n|}
//                           + r^{-|n|} Int_1^r s^{|n|+1} omega ds
//                           + r^{+|n|} Int_r^inf s^{-|n|+1} omega ds ],
//   d_n = Int_1^inf s^{-|n|+1} omega ds.
// The velocity mode is V_r = (i n / r) psi, V_th = -psi', with psi'
// differentiated analytically (no finite differences):
//   V_th = -(d_n/2) r^{-|n|-1} + (1/2) r^{-|n|-1} Int_1^r s^{|n|+1} omega ds
//        - (1/2) r^{+|n|-1} Int_r^inf s^{-|n|+1} omega ds.
// Consequences wired into the construction: div V = 0, rot V = omega,
// V_r(1) = 0 always, and V_th(1) = -d_n, so the full no-slip condition at
// the disk boundary holds exactly when d_n[omega] = 0.

#include "diskflow/fields.hpp"

namespace diskflow {

// Tail-corrected boundary functional d_n = Int_1^inf s^{-|n|+1} omega ds.
// Requires n != 0 and omega decaying faster than r^{|n|-2} (fitted tail),
// else DivergentTailError.
cplx d_n_functional(const ModeScalar& omega, const RadialGrid& grid);

struct StreamMode {
    int n = 0;
    std::vector<cplx> psi;
    cplx d_n;
};

StreamMode streamfunction(const ModeScalar& omega, const RadialGrid& grid);

ModeVector biot_savart(const ModeScalar& omega, const RadialGrid& grid);

} // namespace diskflow
