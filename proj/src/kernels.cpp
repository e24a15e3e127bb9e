#include "diskflow/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace diskflow {

ModeKernelData compute_kernel_data(int n, const PhysParams& phys) {
    phys.validate();
    if (n == 0)
        throw ConfigError("kernel data is defined for modes n != 0 only");

    ModeKernelData k;
    k.n = n;
    k.alpha = phys.alpha;
    k.gamma = phys.gamma;
    k.n_gamma = std::hypot(static_cast<double>(n), phys.gamma / 2.0);

    // zeta from explicit real/imaginary parts of the principal square root of
    // n_gamma^2 + i alpha n; s = alpha n / n_gamma^2 is the shear ratio.
    const double s = phys.alpha * n / (k.n_gamma * k.n_gamma);
    const double root = std::sqrt(1.0 + s * s);
    const double re = k.n_gamma / std::sqrt(2.0) * std::sqrt(root + 1.0);
    const double im_mag = k.n_gamma / std::sqrt(2.0) * std::sqrt(root - 1.0);
    const double sign = (s > 0.0) ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
    k.zeta = cplx(re, sign * im_mag);
    k.xi = re;

    k.kappa_mode_factor =
        (k.xi + k.gamma / 2.0) / ((k.xi - k.gamma / 2.0) * std::abs(n));
    return k;
}

namespace {

void record(XiCheck& chk, const char* what, double value, double bound) {
    // one-sided check value <= bound with relative margin tracking
    const double margin = (bound - value) / std::max(std::abs(bound), 1e-300);
    chk.worst_rel_margin = std::min(chk.worst_rel_margin, margin);
    if (!(value <= bound)) {
        std::ostringstream os;
        os << what << ": " << value << " exceeds " << bound;
        chk.violations.push_back(os.str());
        chk.ok = false;
    }
}

} // namespace

XiCheck check_xi_inequalities(const ModeKernelData& k) {
    XiCheck chk;
    const double mod = std::abs(k.zeta);
    const double an = std::abs(static_cast<double>(k.n));

    record(chk, "xi <= |zeta|", k.xi, mod);
    record(chk, "|zeta| <= sqrt(2) xi", mod, std::numbers::sqrt2 * k.xi);
    record(chk, "xi/|n| <= sqrt|alpha| + gamma", k.xi / an,
           std::sqrt(std::abs(k.alpha)) + k.gamma);
    record(chk, "1/(xi - gamma/2) < 2 gamma", 1.0 / (k.xi - k.gamma / 2.0),
           2.0 * k.gamma);
    if (!(k.xi > k.gamma / 2.0)) {
        chk.ok = false;
        chk.violations.push_back("xi does not exceed gamma/2");
    }
    if (!(k.zeta.real() > 0.0)) {
        chk.ok = false;
        chk.violations.push_back("Re zeta not positive");
    }
    const cplx target(k.n_gamma * k.n_gamma, k.alpha * k.n);
    const double rel = std::abs(k.zeta * k.zeta - target) / std::abs(target);
    if (!(rel <= 1e-13)) {
        std::ostringstream os;
        os << "zeta^2 mismatch, rel err " << rel;
        chk.violations.push_back(os.str());
        chk.ok = false;
    }
    return chk;
}

} // namespace diskflow
