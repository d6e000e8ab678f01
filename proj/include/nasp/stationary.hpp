#pragma once

#include <optional>

#include "nasp/integrate.hpp"
#include "nasp/morse.hpp"

namespace nasp {

/// Bound certificate for the nonstationary regime: for all lambda with
/// ord lambda <= n1, the integral of phi Psi(lambda f) over the region is 0.
struct NonstationaryBound {
    long n1;
    long grad_ord_max;     ///< V: max over the region of min_i ord grad_i f
    long tail_ord_min;     ///< M': min ord over coefficients of degree >= 2 (kInfOrd if none)
    long phi_depth;        ///< constancy depth used for the pieces
};

/// Computes V by recursive subdivision (each coset either has a gradient
/// component of determinate valuation or is split) and returns
/// n1 = min(-depth - V, 1 - 2 depth - M'). Raises errc::gradient_vanishes
/// when grad f has a zero on region ∩ supp phi.
NonstationaryBound nonstationary_bound(const MultiSeries& f, const StepFunction& phi, const Region& region,
                                       long long budget = 10'000'000);

/// Support bound for the transform of theta(y) = phi(x0 + T^-1(y)) |det Jac T^-1(y)|:
/// depth(theta) = max(depth phi, alpha), beta = 1 - depth(theta), certified by
/// computing theta-hat and checking its support directly.
struct ThetaBound {
    long beta;
    bool certified;
};
ThetaBound theta_support_bound(const StepFunction& phi, const MorseData& md);

struct CriticalPointData {
    MorseData md;
    LocalNum f_value;
    CycloNum phi_value;
    long beta;
    std::vector<long> n2; ///< min(beta - ord a_i - alpha, 2 beta - ord a_i - 1)
};

/// Everything the closed formula needs, plus the validity bound N:
/// for ord lambda <= N,
///   I_{f,phi}(lambda) = sum_j Psi(lambda f(x_j)) phi(x_j) prod_i G(lambda a_{j,i}, alpha).
struct PhaseCertificate {
    FieldConfig cfg;
    int nvars = 1;
    long alpha = 1;
    std::optional<long> n1; ///< empty when there is no nonstationary piece
    long N = 0;
    std::vector<CriticalPointData> points;
    long gamma = 1; ///< |det Jac T^-1(0)| exponent convention, recorded

    CycloNum closed_rhs(const LocalNum& lambda) const;
};

PhaseCertificate stationary_phase(const MultiSeries& f, const StepFunction& phi, const Region& omega,
                                  long long budget = 10'000'000);

struct VerifyRecord {
    long ord;
    long unit;
    bool equal;
    CycloNum brute;
    CycloNum closed;
};

struct VerifyReport {
    bool all_equal = true;
    std::vector<VerifyRecord> records;
};

/// Exact comparison closed_rhs(lambda) vs oscillatory_brute(lambda) for
/// lambda = u w^ord over the given orders; units defaults to all units mod w.
VerifyReport verify_certificate(const PhaseCertificate& cert, const MultiSeries& f, const StepFunction& phi,
                                const Region& omega, const std::vector<long>& ords,
                                const std::vector<long>& units = {}, long long budget = 10'000'000,
                                int threads = 0);

} // namespace nasp
