#pragma once
// Per-mode kernel data for the vorticity equation. For mode n != 0 the
// homogeneous solutions of the vorticity operator are r^{-gamma/2 +- zeta_n}
// with
//   n_gamma^2 = n^2 + (gamma/2)^2,   zeta_n = sqrt(n_gamma^2 + i alpha n)
// (principal branch, Re zeta_n > 0). zeta is evaluated from explicit real
// and imaginary parts; xi = Re zeta_n controls every decay estimate.

#include <vector>

#include "diskflow/fields.hpp"

namespace diskflow {

struct ModeKernelData {
    int n = 0;
    double alpha = 0.0;
    double gamma = 0.0;
    double n_gamma = 0.0;       // sqrt(n^2 + (gamma/2)^2)
    cplx zeta;                  // principal sqrt(n_gamma^2 + i alpha n)
    double xi = 0.0;            // Re zeta
    double kappa_mode_factor = 0.0; // (xi + gamma/2) / ((xi - gamma/2) |n|)
};

// n = 0 is rejected: the zero mode is solved by its own closed form and has
// no zeta kernel.
ModeKernelData compute_kernel_data(int n, const PhysParams& phys);

// Bounds that certify the kernel data for contraction estimates:
//   xi <= |zeta| <= sqrt(2) xi
//   xi / |n| <= sqrt(|alpha|) + gamma
//   0 < 1/(xi - gamma/2) < 2 gamma
// plus the branch checks Re zeta > 0 and zeta^2 == n_gamma^2 + i alpha n.
struct XiCheck {
    bool ok = true;
    double worst_rel_margin = 1.0; // min over checks of (bound - value)/bound
    std::vector<std::string> violations;
};
XiCheck check_xi_inequalities(const ModeKernelData& k);

} // namespace diskflow
