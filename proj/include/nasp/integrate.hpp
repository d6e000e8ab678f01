#pragma once

#include "nasp/charfun.hpp"
#include "nasp/series.hpp"

namespace nasp {

/// Haar integral of a step function: sum of value * volume over cells.
CycloNum integrate_step(const StepFunction& phi);

struct BruteOptions {
    long long budget = 10'000'000; ///< enumerated cosets before DepthOverflow
    /// Enumerate every coset at the guaranteed constancy depth instead of
    /// stopping where the integrand is provably constant or provably
    /// integrates to zero. Same value, used for cross-checks.
    bool flat = false;
    long extra_depth = 0; ///< flat mode: refine this many levels past the guarantee
};

/// Exact oscillatory integral int_Omega phi(x) Psi(lambda f(x)) dx by finite
/// coset summation. f must be a truncation-free polynomial with integral
/// coefficients; supp phi must lie inside Omega.
CycloNum oscillatory_brute(const MultiSeries& f, const StepFunction& phi, const LocalNum& lambda,
                           const Region& omega, const BruteOptions& opts = {});

/// Fourier transform of a step function, cell-closed-form based:
/// the transform of v * 1_{c + (w^d O)^n} is v * Psi(<c, xi>) q^(-dn) on
/// (w^(1-d) O)^n, re-expressed as a single step function.
StepFunction fourier(const StepFunction& phi);

/// Exact equality of step functions (pointwise, via exact refinement).
bool step_equal(const StepFunction& a, const StepFunction& b);

struct DoubleFourierReport {
    mpq_class kappa;     ///< measured constant in hat-hat phi(x) = kappa phi(-x)
    bool scalar_ok;      ///< hat-hat phi is exactly kappa * phi(-x)
    bool plancherel_ok;  ///< int hat(phi) g = int phi hat(g) for the partner g
    StepFunction hathat;
};

/// Applies the transform twice, identifies the exact scalar relating the
/// result to x -> phi(-x), and runs a Plancherel pairing against `partner`.
/// Raises errc::constant_not_scalar when no scalar works.
DoubleFourierReport double_fourier_check(const StepFunction& phi, const StepFunction& partner);

bool plancherel_check(const StepFunction& f, const StepFunction& g);

/// int_{w^alpha O} Psi(c u^2) du by direct enumeration at the constancy depth.
CycloNum gauss_brute(const LocalNum& c, long alpha, long long budget = 10'000'000);

/// Same integral in closed form: reduce to the normalized integral over O and
/// apply G(s) = p^-1 G(s+2) for s <= -1 with base cases
/// G(s >= 1) = 1 and G(0) = p^-1 sum_x Psi(ac(c) x^2).
CycloNum gauss_closed(const LocalNum& c, long alpha);

/// int_{w^alpha O} Psi(a x^2 + b x) dx by direct enumeration.
CycloNum gauss_brute_shifted(const LocalNum& a, const LocalNum& b, long alpha, long long budget = 10'000'000);

/// Exact comparison of int Psi(ax^2 + bx) and int Psi(ax^2) over w^alpha O.
bool gauss_shift_invariance(const LocalNum& a, const LocalNum& b, long alpha, long long budget = 10'000'000);

} // namespace nasp
