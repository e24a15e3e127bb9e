#pragma once
// Weighted radial integrals of grid data against complex power weights,
//
//   inner:  K[j] = r_j^{-c} * Int_1^{r_j}   s^a g(s) ds
//   outer:  O[j] = r_j^{+c} * Int_{r_j}^inf s^a g(s) ds
//
// evaluated for every node in O(m) by damped recurrences in t = log r.
// The damping exponent c is supplied by the caller so that only the
// combinations a+1-c (inner) and a+1+c (outer) are ever exponentiated;
// these must stay moderate even when |a| and |c| are large (the bare powers
// r^{a} and r^{c} are never materialised). Re(c) >= 0 is required so the
// recurrences are contractive.
//
// Per-interval rule: with G(t) = g(e^t), each integral is
// Int e^{(a+1) t} G(t) dt. On one interval G is modelled as a single complex
// exponential through the endpoint values whenever that fit is
// well-conditioned (exact for any profile of the form A r^mu, mu complex:
// pure powers, including oscillatory ones) and as linear in t otherwise
// (second order). The truncated far field beyond r_max is closed by an
// analytic power-law tail fitted over the last grid decade.

#include <vector>

#include "diskflow/fields.hpp"

namespace diskflow::quad {

// Power-law far-field model g(r) ~= anchor * (r / r_max)^(-beta_c) with a
// complex exponent: beta (decay of |g|) least-squares fitted to log|g| over
// grid nodes in [r_max/10, r_max], phase_slope (d arg g / d log r) from the
// mean phase increment there. Exact for tails A r^{-mu} with mu complex.
struct TailFit {
    double beta = 0.0;
    double phase_slope = 0.0;
    cplx anchor = 0.0;      // g at the last node
    bool negligible = true; // tail window at/below roundoff: treat tail as 0

    cplx beta_c() const { return {beta, -phase_slope}; }
};

TailFit fit_power_tail(const RadialGrid& grid, const std::vector<cplx>& g);

std::vector<cplx> inner_weighted(const RadialGrid& grid, const std::vector<cplx>& g,
                                 cplx a, cplx c);

// Throws DivergentTailError when the fitted tail exponent cannot support the
// weight (needs beta > Re(a) + 1 + margin).
std::vector<cplx> outer_weighted(const RadialGrid& grid, const std::vector<cplx>& g,
                                 cplx a, cplx c);

// Int_1^inf s^a g(s) ds, tail-corrected.
cplx total_weighted(const RadialGrid& grid, const std::vector<cplx>& g, cplx a);

// Int_0^h e^{b tau} G(tau) dtau from endpoint values G(0) = g0, G(h) = g1.
// Exposed for tests.
cplx interval_integral(cplx g0, cplx g1, cplx b, double h);

} // namespace diskflow::quad
