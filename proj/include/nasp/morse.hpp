#pragma once

#include "nasp/charfun.hpp"
#include "nasp/series.hpp"

namespace nasp {

/// Diagonalized quadratic normal form around a nondegenerate critical point:
/// f(x0 + y) = f(x0) + sum_i a_i T_i(y)^2 on the polydisc (w^alpha O)^n,
/// certified up to the series degree cutoff and coefficient precision.
struct MorseData {
    std::vector<LocalNum> center;
    std::vector<LocalNum> units; ///< the a_i, all of valuation 0
    SeriesMap T;                 ///< T(0) = 0, unit Jacobian at 0
    long alpha = 1;
    /// Valuation below which every residual coefficient provably vanishes
    /// (LocalNum::kInfOrd when the residual cancels exactly).
    long residual_floor = 0;
};

/// All critical points of f inside Omega, found by enumerating residue
/// classes where grad f vanishes and Newton-lifting the nondegenerate ones.
/// Classes with grad ≡ 0 and det Hess ≡ 0 mod w raise
/// errc::degenerate_critical_class.
std::vector<std::vector<LocalNum>> find_critical_points(const MultiSeries& f, const Region& omega);

/// Iterated completion of squares at a critical point x0 (nondegenerate mod
/// w). Diagonal pivots are made units by variable swaps and shears decided on
/// the constant Hessian; a_i are the stage pivots, pinned for determinism.
MorseData morse_normal_form(const MultiSeries& f, const std::vector<LocalNum>& x0, long alpha);

struct MorseCheck {
    bool ok = false;
    long samples = 0;
    long worst_observed_floor = 0; ///< smallest certified vanishing level seen
};

/// Pointwise evaluation of the normal-form identity at random polydisc
/// points; any digit mismatch below the certified floor fails.
MorseCheck verify_morse(const MorseData& md, const MultiSeries& f, int samples, unsigned seed = 1);

/// det Jac(m) has unit constant term (so |det Jac m(y)| = 1 on (wO)^n,
/// integral coefficients being automatic).
bool unit_jacobian_certificate(const SeriesMap& m);

} // namespace nasp
