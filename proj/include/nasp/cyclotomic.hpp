#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "nasp/errors.hpp"

namespace nasp {

/// Exact element of Q(zeta_{p^M}), stored as rational coordinates on the
/// power basis {zeta^j : 0 <= j < phi(p^M)}. Level M = 0 means a plain
/// rational. Values are kept at the minimal level that represents them, so
/// equality is coefficient-wise after promotion to a common level.
class CycloNum {
  public:
    CycloNum() = default;

    static CycloNum rational(long p, const mpq_class& q);
    static CycloNum zero(long p) { return rational(p, mpq_class(0)); }
    static CycloNum one(long p) { return rational(p, mpq_class(1)); }
    /// zeta_{p^M}^e, exponent reduced mod p^M and rewritten on the basis.
    static CycloNum zeta_pow(long p, int level, long e);

    long prime() const { return p_; }
    int level() const { return level_; }
    const std::vector<mpq_class>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_rational() const { return level_ == 0; }
    /// The rational value when level == 0; error otherwise.
    const mpq_class& rational_value() const;

    friend CycloNum operator+(const CycloNum& a, const CycloNum& b);
    friend CycloNum operator-(const CycloNum& a, const CycloNum& b);
    friend CycloNum operator*(const CycloNum& a, const CycloNum& b);
    CycloNum operator-() const;
    CycloNum conj() const; ///< zeta -> zeta^{-1}
    CycloNum scaled(const mpq_class& q) const;

    friend bool operator==(const CycloNum& a, const CycloNum& b);
    friend bool operator!=(const CycloNum& a, const CycloNum& b) { return !(a == b); }

    /// Double-precision embedding zeta -> exp(2 pi i / p^M); display only.
    std::pair<double, double> embed_complex() const;

    std::string to_string() const;

    static long phi(long p, int level);
    static long pow_l(long p, int level); ///< p^level, guarded against overflow

    /// Representation at a target level >= level(); used by accumulators.
    CycloNum promoted(int level) const;
    /// Canonicalize a raw coefficient vector on exponents [0, p^M) (not yet
    /// reduced mod the cyclotomic polynomial).
    static CycloNum from_raw_exponents(long p, int level, std::vector<mpq_class> raw);

  private:
    static void check_same_prime(const CycloNum& a, const CycloNum& b);
    void demote();

    long p_ = 3;
    int level_ = 0;
    std::vector<mpq_class> c_ = {mpq_class(0)};
};

/// Dense integer accumulator for big character sums: counts[e] tallies
/// occurrences of zeta_{p^M}^e; `finish` reduces once and scales.
class CharSumAccum {
  public:
    CharSumAccum(long p, int level);
    void add(long exponent, int64_t weight = 1);
    /// Add a canonical CycloNum of level <= this level, scaled by an integer.
    void add_scaled_int(const CycloNum& v, int64_t weight);
    /// Add v * zeta^rot * weight, rotating v's exponents in the raw basis.
    void add_rotated(const CycloNum& v, long rot, int64_t weight);
    CycloNum finish(const mpq_class& scale) const;
    long modulus() const { return mod_; }

  private:
    long p_;
    int level_;
    long mod_;
    std::vector<mpq_class> acc_; // used when a non-integer slips in
    std::vector<int64_t> counts_;
};

} // namespace nasp
