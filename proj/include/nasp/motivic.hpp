#pragma once

#include <set>

#include "nasp/qpoly.hpp"
#include "nasp/stationary.hpp"

namespace nasp {

/// Element of Z[L, L^-1]: volume bookkeeping uniform in the residue field,
/// specialized by L -> p.
struct LPoly {
    std::map<long, mpz_class> coeffs; // exponent -> coefficient

    static LPoly term(const mpz_class& c, long e);
    friend LPoly operator+(const LPoly& a, const LPoly& b);
    friend LPoly operator*(const LPoly& a, const LPoly& b);
    mpq_class specialize(long p) const;
    std::string to_string() const;
    bool operator==(const LPoly&) const = default;
};

/// Prime-independent step-function description: rational centers, integer
/// depths, rational values. Reduced into each field on demand.
struct StepSpec {
    struct SCell {
        std::vector<mpq_class> center;
        long depth = 0;
        mpq_class value = 1;
    };
    int nvars = 1;
    std::vector<SCell> cells;

    StepFunction to_step(const FieldConfig& cfg) const;
};

struct RegionSpec {
    struct SCoset {
        std::vector<mpq_class> center;
        long depth = 0;
    };
    int nvars = 1;
    std::vector<SCoset> cosets; ///< empty means all of O^n

    Region to_region(const FieldConfig& cfg) const;
};

/// Uniform-in-p normal-form certificate: the same rational data specializes
/// to the local certificate at every good prime, in both field kinds.
struct UniformFormula {
    int nvars = 1;
    std::vector<mpq_class> x0;
    mpq_class f_at_x0;
    std::vector<mpq_class> a; ///< stage pivots; formal Gauss symbols G(a_i, alpha)
    long alpha = 1;
    std::set<long> bad_primes;
};

/// Completion of squares over Q at an exact rational critical point. The
/// pivot decisions mirror the local pipeline; every prime touching a decision
/// (numerators and denominators of examined entries, x0, det Hess, f's
/// coefficients, and 2) lands in bad_primes.
UniformFormula uniform_normal_form(const QPoly& f, const std::vector<mpq_class>& x0);

/// The per-prime right-hand side obtained from a UniformFormula by mapping
/// E(r) -> Psi(r), G(a_i, alpha) -> gauss_closed, L -> p.
struct SpecializedRhs {
    FieldConfig cfg;
    LocalNum f0;
    std::vector<LocalNum> a;
    long alpha;

    CycloNum value(const LocalNum& lambda, const CycloNum& phi_at_x0) const;
};

SpecializedRhs specialize(const UniformFormula& uf, const FieldConfig& cfg);

enum class UniformStatus { ok, bad_prime, mismatch, failed };

struct UniformPrimeReport {
    long p;
    Kind kind;
    UniformStatus status;
    long N = 0;
    long lambdas_checked = 0;
    std::string note;
};

struct UniformOptions {
    int sweep_ords = 2; ///< check ord lambda in {N, ..., N - sweep_ords + 1}
    int precision = 24;
    int degree_cutoff = 12;
    long long budget = 10'000'000;
    std::vector<Kind> kinds = {Kind::padic, Kind::laurent};
};

/// For each good prime: build the per-prime data, run the local certificate,
/// compare its alpha and units with the specialized ones, and check
/// specialized RHS = certificate RHS = brute-force LHS over the sweep.
std::vector<UniformPrimeReport> check_uniform(const QPoly& f, const std::vector<mpq_class>& x0,
                                              const StepSpec& phi_spec, const RegionSpec& omega_spec,
                                              const std::vector<long>& primes, const UniformOptions& opts = {});

} // namespace nasp
