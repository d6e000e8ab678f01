#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "nasp/errors.hpp"

namespace nasp {

/// Which branch of the local field: Q_p (digit carries) or F_p((t))
/// (componentwise digit arithmetic).
enum class Kind { padic, laurent };

/// Ambient field description: branch, odd prime residue characteristic and
/// the number of significant digits tracked per value.
struct FieldConfig {
    Kind kind = Kind::padic;
    long p = 3;
    int precision = 24;

    static FieldConfig padic(long p, int precision = 24) { return validated({Kind::padic, p, precision}); }
    static FieldConfig laurent(long p, int precision = 24) { return validated({Kind::laurent, p, precision}); }
    static FieldConfig validated(FieldConfig cfg);

    const char* uniformizer_symbol() const { return kind == Kind::padic ? "p" : "t"; }
    bool operator==(const FieldConfig&) const = default;
};

bool is_odd_prime(long p);
long mod_inverse(long a, long p);
long mod_pow(long base, long exp, long m);
int legendre_symbol(long a, long p);
/// Square root mod an odd prime, or -1 when `a` is a non-residue.
long mod_sqrt(long a, long p);

/// Truncated element of Q_p or F_p((t)): a valuation plus a window of base-p
/// digits. Three states:
///   * exact zero           — no digits, known to be 0 at every position;
///   * nonzero              — digits d[0..k) at positions [ord, ord+k),
///                            leading digit nonzero, positions >= ord+k unknown;
///   * pseudo-zero          — every digit below `floor` is known to vanish but
///                            nothing is known beyond; arises from cancellation.
/// Operations needing a leading digit of a pseudo-zero raise
/// errc::precision_exhausted instead of guessing.
class LocalNum {
  public:
    static constexpr long kInfOrd = std::numeric_limits<long>::max() / 4;

    LocalNum() = default;

    static LocalNum zero(const FieldConfig& cfg);
    static LocalNum pseudo_zero(const FieldConfig& cfg, long floor);
    /// Value sum(digits[i] * w^(val+i)); window is normalized (leading zeros
    /// shift the valuation up) and truncated to cfg.precision digits.
    static LocalNum from_digits(const FieldConfig& cfg, long val, std::vector<int64_t> digits);
    static LocalNum from_integer(const FieldConfig& cfg, long v);
    static LocalNum from_rational(const FieldConfig& cfg, const mpz_class& num, const mpz_class& den);
    static LocalNum from_rational(const FieldConfig& cfg, const mpq_class& q);
    static LocalNum uniformizer_pow(const FieldConfig& cfg, long k);
    /// u * w^val with u a single digit in [1, p).
    static LocalNum unit_rep(const FieldConfig& cfg, long u, long val = 0);

    const FieldConfig& config() const { return cfg_; }

    bool is_zero() const { return d_.empty() && !pseudo_; }
    bool is_pseudo_zero() const { return pseudo_; }
    bool is_zero_to_precision() const { return d_.empty(); }
    bool is_unit() const { return !d_.empty() && val_ == 0; }

    /// Valuation. kInfOrd for the exact zero; pseudo-zeros have indeterminate
    /// valuation and raise precision_exhausted.
    long ord() const;
    /// Certified lower bound on ord; defined in every state.
    long ord_floor() const;
    /// Digits at positions >= known_floor() are unknown.
    long known_floor() const;
    int precision() const { return static_cast<int>(d_.size()); }

    /// Digit at an absolute position; 0 below the window, throws at/above the
    /// known floor.
    long digit_at(long pos) const;
    const std::vector<int64_t>& digits() const { return d_; }

    /// Angular component: leading digit for nonzero values, 0 for the exact zero.
    long ac() const;
    /// |x| reported as (q, e) with |x| = q^e; nullopt exponent encodes |0| = 0.
    std::pair<long, std::optional<long>> abs_pair() const;

    LocalNum operator-() const;
    friend LocalNum operator+(const LocalNum& a, const LocalNum& b);
    friend LocalNum operator-(const LocalNum& a, const LocalNum& b);
    friend LocalNum operator*(const LocalNum& a, const LocalNum& b);
    LocalNum inv() const;
    LocalNum shift(long k) const; ///< multiply by w^k

    /// Square root when ord is even and the leading digit is a residue;
    /// root normalized so ac(root) <= p/2. nullopt when no root exists.
    std::optional<LocalNum> sqrt_hensel() const;

    /// Equality of all digits on the shared known window (exact-or-fail
    /// comparisons happen at full working precision where windows coincide).
    friend bool operator==(const LocalNum& a, const LocalNum& b);
    friend bool operator!=(const LocalNum& a, const LocalNum& b) { return !(a == b); }

    std::string to_string() const;
    static LocalNum parse(const FieldConfig& cfg, std::string_view text);

  private:
    LocalNum(FieldConfig cfg, long val, std::vector<int64_t> d, bool pseudo)
        : cfg_(cfg), val_(val), d_(std::move(d)), pseudo_(pseudo) {}

    static void check_same_config(const LocalNum& a, const LocalNum& b);

    FieldConfig cfg_{};
    long val_ = kInfOrd;       // leading position; floor for pseudo-zeros; kInfOrd for 0
    std::vector<int64_t> d_{}; // empty for both zero states
    bool pseudo_ = false;
};

} // namespace nasp
