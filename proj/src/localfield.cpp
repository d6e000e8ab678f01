#include "nasp/localfield.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace nasp {

const char* errc_name(errc k) {
    switch (k) {
        case errc::division_by_zero: return "DivisionByZero";
        case errc::config_mismatch: return "ConfigMismatch";
        case errc::precision_exhausted: return "PrecisionExhausted";
        case errc::denominator_not_unit: return "DenominatorNotUnit";
        case errc::nonzero_constant_term: return "NonzeroConstantTerm";
        case errc::singular_jacobian: return "SingularJacobian";
        case errc::non_integral_coefficient: return "NonIntegralCoefficient";
        case errc::non_integral_rescale: return "NonIntegralRescale";
        case errc::bad_constant_term: return "BadConstantTerm";
        case errc::convergence_domain: return "ConvergenceDomain";
        case errc::prime_mismatch: return "PrimeMismatch";
        case errc::overlapping_cells: return "OverlappingCells";
        case errc::support_mismatch: return "SupportMismatch";
        case errc::depth_overflow: return "DepthOverflow";
        case errc::gradient_vanishes: return "GradientVanishes";
        case errc::budget_exhausted: return "BudgetExhausted";
        case errc::not_critical: return "NotCritical";
        case errc::degenerate_hessian: return "DegenerateHessian";
        case errc::degenerate_critical_class: return "DegenerateCriticalClass";
        case errc::not_critical_over_q: return "NotCriticalOverQ";
        case errc::degenerate_hessian_over_q: return "DegenerateHessianOverQ";
        case errc::bad_prime: return "BadPrime";
        case errc::syntax_error: return "SyntaxError";
        case errc::non_polynomial: return "NonPolynomial";
        case errc::constant_not_scalar: return "ConstantNotScalar";
        case errc::invalid_argument: return "InvalidArgument";
    }
    return "UnknownError";
}

bool is_odd_prime(long p) {
    if (p < 3 || p % 2 == 0) return false;
    for (long d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

long mod_pow(long base, long exp, long m) {
    long r = 1 % m;
    base %= m;
    if (base < 0) base += m;
    while (exp > 0) {
        if (exp & 1) r = static_cast<long>((__int128)r * base % m);
        base = static_cast<long>((__int128)base * base % m);
        exp >>= 1;
    }
    return r;
}

long mod_inverse(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) fail(errc::division_by_zero, "inverse of 0 mod p");
    return mod_pow(a, p - 2, p);
}

int legendre_symbol(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    long r = mod_pow(a, (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

long mod_sqrt(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    if (legendre_symbol(a, p) != 1) return -1;
    for (long r = 1; r < p; ++r)
        if (r * r % p == a) return r;
    return -1;
}

FieldConfig FieldConfig::validated(FieldConfig cfg) {
    if (!is_odd_prime(cfg.p)) fail(errc::invalid_argument, "p must be an odd prime >= 3");
    if (cfg.p >= (1L << 20)) fail(errc::invalid_argument, "p too large for exact enumeration");
    if (cfg.precision < 1) fail(errc::invalid_argument, "precision must be >= 1");
    return cfg;
}

namespace {

// Fixed-window digit arithmetic mod w^P. Vectors have length P, entries in [0, p).
using Window = std::vector<int64_t>;

Window win_mul(const Window& a, const Window& b, long p, Kind kind) {
    size_t P = a.size();
    Window acc(P, 0);
    for (size_t i = 0; i < P; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; i + j < P; ++j) acc[i + j] += a[i] * b[j];
    }
    if (kind == Kind::padic) {
        int64_t carry = 0;
        for (size_t k = 0; k < P; ++k) {
            int64_t s = acc[k] + carry;
            acc[k] = s % p;
            carry = s / p;
        }
    } else {
        for (auto& d : acc) d %= p;
    }
    return acc;
}

Window win_add(const Window& a, const Window& b, long p, Kind kind) {
    size_t P = a.size();
    Window out(P, 0);
    int64_t carry = 0;
    for (size_t k = 0; k < P; ++k) {
        int64_t s = a[k] + b[k] + carry;
        if (kind == Kind::padic) {
            out[k] = s % p;
            carry = s / p;
        } else {
            out[k] = s % p;
            carry = 0;
        }
    }
    return out;
}

Window win_neg(const Window& a, long p, Kind kind) {
    size_t P = a.size();
    Window out(P, 0);
    if (kind == Kind::laurent) {
        for (size_t k = 0; k < P; ++k) out[k] = (p - a[k]) % p;
        return out;
    }
    int64_t carry = 1;
    for (size_t k = 0; k < P; ++k) {
        int64_t s = (p - 1 - a[k]) + carry;
        out[k] = s % p;
        carry = s / p;
    }
    return out;
}

Window win_sub(const Window& a, const Window& b, long p, Kind kind) {
    return win_add(a, win_neg(b, p, kind), p, kind);
}

Window win_scalar(size_t P, int64_t v) {
    Window w(P, 0);
    w[0] = v;
    return w;
}

// Newton inverse of a unit window: x <- x (2 - u x).
Window win_inv(const Window& u, long p, Kind kind) {
    size_t P = u.size();
    Window x = win_scalar(P, mod_inverse(u[0], p));
    Window two = win_scalar(P, 2 % p);
    for (size_t correct = 1; correct < P; correct *= 2)
        x = win_mul(x, win_sub(two, win_mul(u, x, p, kind), p, kind), p, kind);
    return x;
}

bool win_is(const Window& a, int64_t v) {
    if (a[0] != v) return false;
    for (size_t k = 1; k < a.size(); ++k)
        if (a[k] != 0) return false;
    return true;
}

} // namespace

LocalNum LocalNum::zero(const FieldConfig& cfg) { return LocalNum(cfg, kInfOrd, {}, false); }

LocalNum LocalNum::pseudo_zero(const FieldConfig& cfg, long floor) {
    return LocalNum(cfg, floor, {}, true);
}

LocalNum LocalNum::from_digits(const FieldConfig& cfg, long val, std::vector<int64_t> digits) {
    for (auto& d : digits) {
        d %= cfg.p;
        if (d < 0) d += cfg.p;
    }
    size_t lead = 0;
    while (lead < digits.size() && digits[lead] == 0) ++lead;
    if (lead == digits.size()) return zero(cfg);
    digits.erase(digits.begin(), digits.begin() + lead);
    val += static_cast<long>(lead);
    if (digits.size() > static_cast<size_t>(cfg.precision)) digits.resize(cfg.precision);
    return LocalNum(cfg, val, std::move(digits), false);
}

LocalNum LocalNum::from_integer(const FieldConfig& cfg, long v) {
    return from_rational(cfg, mpz_class(v), mpz_class(1));
}

LocalNum LocalNum::from_rational(const FieldConfig& cfg, const mpq_class& q) {
    return from_rational(cfg, q.get_num(), q.get_den());
}

LocalNum LocalNum::from_rational(const FieldConfig& cfg, const mpz_class& num0, const mpz_class& den0) {
    if (den0 == 0) fail(errc::division_by_zero, "zero denominator");
    if (num0 == 0) return zero(cfg);
    mpz_class num = num0, den = den0;
    if (den < 0) { den = -den; num = -num; }
    if (cfg.kind == Kind::laurent) {
        // Q embeds through the residue field; the denominator must be a unit mod p.
        if (mpz_divisible_ui_p(den.get_mpz_t(), cfg.p)) fail(errc::denominator_not_unit, "p divides denominator");
        mpz_class nr = num % cfg.p, dr = den % cfg.p;
        long n = nr.get_si(), d = dr.get_si();
        if (n < 0) n += cfg.p;
        long r = n % cfg.p * mod_inverse(d, cfg.p) % cfg.p;
        if (r == 0) return zero(cfg);
        std::vector<int64_t> ds(cfg.precision, 0);
        ds[0] = r;
        return LocalNum(cfg, 0, std::move(ds), false);
    }
    long val = 0;
    while (mpz_divisible_ui_p(num.get_mpz_t(), cfg.p)) { num /= cfg.p; ++val; }
    while (mpz_divisible_ui_p(den.get_mpz_t(), cfg.p)) { den /= cfg.p; --val; }
    std::vector<int64_t> ds(cfg.precision, 0);
    mpz_class dmod = den % cfg.p;
    long dinv = mod_inverse(((dmod.get_si() % cfg.p) + cfg.p) % cfg.p, cfg.p);
    mpz_class r = num;
    for (int i = 0; i < cfg.precision; ++i) {
        mpz_class rm = r % cfg.p;
        long rl = rm.get_si();
        if (rl < 0) rl += cfg.p;
        long dig = rl * dinv % cfg.p;
        ds[i] = dig;
        r = (r - dig * den) / cfg.p;
    }
    return LocalNum(cfg, val, std::move(ds), false);
}

LocalNum LocalNum::uniformizer_pow(const FieldConfig& cfg, long k) {
    std::vector<int64_t> ds(cfg.precision, 0);
    ds[0] = 1;
    return LocalNum(cfg, k, std::move(ds), false);
}

LocalNum LocalNum::unit_rep(const FieldConfig& cfg, long u, long val) {
    u %= cfg.p;
    if (u < 0) u += cfg.p;
    if (u == 0) fail(errc::invalid_argument, "unit_rep needs u in [1, p)");
    std::vector<int64_t> ds(cfg.precision, 0);
    ds[0] = u;
    return LocalNum(cfg, val, std::move(ds), false);
}

long LocalNum::ord() const {
    if (is_zero()) return kInfOrd;
    if (pseudo_) fail(errc::precision_exhausted, "valuation of a value that vanishes to working precision");
    return val_;
}

long LocalNum::ord_floor() const {
    if (is_zero()) return kInfOrd;
    return val_;
}

long LocalNum::known_floor() const {
    if (is_zero()) return kInfOrd;
    if (pseudo_) return val_;
    return val_ + static_cast<long>(d_.size());
}

long LocalNum::digit_at(long pos) const {
    if (pos >= known_floor()) fail(errc::precision_exhausted, "digit beyond known window");
    if (d_.empty() || pos < val_) return 0;
    return d_[static_cast<size_t>(pos - val_)];
}

long LocalNum::ac() const {
    if (is_zero()) return 0;
    if (pseudo_) fail(errc::precision_exhausted, "ac of a value that vanishes to working precision");
    return d_[0];
}

std::pair<long, std::optional<long>> LocalNum::abs_pair() const {
    if (is_zero_to_precision()) {
        if (pseudo_) fail(errc::precision_exhausted, "absolute value of a pseudo-zero");
        return {cfg_.p, std::nullopt};
    }
    return {cfg_.p, -val_};
}

void LocalNum::check_same_config(const LocalNum& a, const LocalNum& b) {
    if (!(a.cfg_ == b.cfg_)) fail(errc::config_mismatch, "operands from different field configs");
}

LocalNum operator+(const LocalNum& a, const LocalNum& b) {
    LocalNum::check_same_config(a, b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const FieldConfig& cfg = a.cfg_;
    long F = std::min(a.known_floor(), b.known_floor());
    long base = std::min(a.ord_floor(), b.ord_floor());
    if (F <= base) return LocalNum::pseudo_zero(cfg, F);
    size_t W = static_cast<size_t>(F - base);
    std::vector<int64_t> out(W, 0);
    int64_t carry = 0;
    for (size_t k = 0; k < W; ++k) {
        long pos = base + static_cast<long>(k);
        int64_t s = a.digit_at(pos) + b.digit_at(pos) + carry;
        if (cfg.kind == Kind::padic) {
            out[k] = s % cfg.p;
            carry = s / cfg.p;
        } else {
            out[k] = s % cfg.p;
        }
    }
    size_t lead = 0;
    while (lead < W && out[lead] == 0) ++lead;
    if (lead == W) return LocalNum::pseudo_zero(cfg, F);
    out.erase(out.begin(), out.begin() + lead);
    if (out.size() > static_cast<size_t>(cfg.precision)) out.resize(cfg.precision);
    return LocalNum(cfg, base + static_cast<long>(lead), std::move(out), false);
}

LocalNum LocalNum::operator-() const {
    if (is_zero() || pseudo_) return *this;
    Window w(d_.begin(), d_.end());
    w = win_neg(w, cfg_.p, cfg_.kind);
    return LocalNum(cfg_, val_, std::move(w), false); // leading digit p - d0 != 0
}

LocalNum operator-(const LocalNum& a, const LocalNum& b) { return a + (-b); }

LocalNum operator*(const LocalNum& a, const LocalNum& b) {
    LocalNum::check_same_config(a, b);
    const FieldConfig& cfg = a.cfg_;
    if (a.is_zero() || b.is_zero()) return LocalNum::zero(cfg);
    if (a.is_pseudo_zero() || b.is_pseudo_zero())
        return LocalNum::pseudo_zero(cfg, a.ord_floor() + b.ord_floor());
    size_t W = std::min(a.d_.size(), b.d_.size());
    Window wa(a.d_.begin(), a.d_.begin() + W), wb(b.d_.begin(), b.d_.begin() + W);
    Window out = win_mul(wa, wb, cfg.p, cfg.kind);
    return LocalNum(cfg, a.val_ + b.val_, std::move(out), false); // d0a*d0b != 0 mod p
}

LocalNum LocalNum::inv() const {
    if (is_zero()) fail(errc::division_by_zero, "inverse of zero");
    if (pseudo_) fail(errc::precision_exhausted, "inverse of a value that vanishes to working precision");
    Window u(d_.begin(), d_.end());
    Window x = win_inv(u, cfg_.p, cfg_.kind);
    if (!win_is(win_mul(u, x, cfg_.p, cfg_.kind), 1)) fail(errc::precision_exhausted, "inverse verification failed");
    return LocalNum(cfg_, -val_, std::move(x), false);
}

LocalNum LocalNum::shift(long k) const {
    if (is_zero()) return *this;
    LocalNum r = *this;
    r.val_ += k;
    return r;
}

std::optional<LocalNum> LocalNum::sqrt_hensel() const {
    if (is_zero()) return *this;
    if (pseudo_) fail(errc::precision_exhausted, "sqrt of a value that vanishes to working precision");
    if (val_ % 2 != 0) return std::nullopt;
    long r0 = mod_sqrt(d_[0], cfg_.p);
    if (r0 < 0) return std::nullopt;
    Window u(d_.begin(), d_.end());
    Window x = win_scalar(u.size(), r0);
    Window inv2 = win_inv(win_scalar(u.size(), 2 % cfg_.p), cfg_.p, cfg_.kind);
    for (size_t correct = 1; correct < u.size(); correct *= 2)
        x = win_mul(inv2, win_add(x, win_mul(u, win_inv(x, cfg_.p, cfg_.kind), cfg_.p, cfg_.kind), cfg_.p, cfg_.kind),
                    cfg_.p, cfg_.kind);
    if (win_mul(x, x, cfg_.p, cfg_.kind) != u) fail(errc::precision_exhausted, "sqrt verification failed");
    LocalNum root(cfg_, val_ / 2, std::move(x), false);
    if (root.ac() > cfg_.p / 2) root = -root;
    return root;
}

bool operator==(const LocalNum& a, const LocalNum& b) {
    LocalNum::check_same_config(a, b);
    long W = std::min(a.known_floor(), b.known_floor());
    if (W >= LocalNum::kInfOrd) return true; // both exact zeros
    long lo = std::min(a.ord_floor(), b.ord_floor());
    if (lo >= W) return true; // nothing distinguishable on the shared window
    for (long pos = lo; pos < W; ++pos)
        if (a.digit_at(pos) != b.digit_at(pos)) return false;
    return true;
}

std::string LocalNum::to_string() const {
    const char* sym = cfg_.uniformizer_symbol();
    if (is_zero()) return "0";
    if (pseudo_) {
        std::ostringstream os;
        os << "O(" << sym << "^" << val_ << ")";
        return os.str();
    }
    std::ostringstream os;
    os << sym << "^" << val_ << " * (";
    bool first = true;
    for (size_t i = 0; i < d_.size(); ++i) {
        if (d_[i] == 0) continue;
        if (!first) os << " + ";
        os << d_[i];
        if (i == 1) os << "*" << sym;
        if (i > 1) os << "*" << sym << "^" << i;
        first = false;
    }
    os << ")";
    return os.str();
}

namespace {

struct Cursor {
    std::string_view s;
    size_t i = 0;
    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }
    bool eat(std::string_view w) {
        skip_ws();
        if (s.substr(i, w.size()) == w) { i += w.size(); return true; }
        return false;
    }
    long integer() {
        skip_ws();
        bool neg = eat('-');
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            fail(errc::syntax_error, "expected integer in local-field literal");
        long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }
};

} // namespace

LocalNum LocalNum::parse(const FieldConfig& cfg, std::string_view text) {
    Cursor c{text};
    c.skip_ws();
    if (c.eat('0')) {
        c.skip_ws();
        if (c.i == c.s.size()) return zero(cfg);
        fail(errc::syntax_error, "trailing characters after 0");
    }
    const std::string sym = cfg.uniformizer_symbol();
    if (c.eat("O(")) {
        if (!c.eat(sym)) fail(errc::syntax_error, "expected uniformizer in O(...)");
        if (!c.eat('^')) fail(errc::syntax_error, "expected ^ in O(...)");
        long f = c.integer();
        if (!c.eat(')')) fail(errc::syntax_error, "expected ) in O(...)");
        return pseudo_zero(cfg, f);
    }
    if (!c.eat(sym)) fail(errc::syntax_error, "expected uniformizer symbol");
    if (!c.eat('^')) fail(errc::syntax_error, "expected ^ after uniformizer");
    long val = c.integer();
    if (!c.eat('*') || !c.eat('(')) fail(errc::syntax_error, "expected * ( after valuation");
    std::vector<int64_t> ds(cfg.precision, 0);
    bool done = false;
    while (!done) {
        long coef = c.integer();
        long pos = 0;
        if (c.eat('*')) {
            if (!c.eat(sym)) fail(errc::syntax_error, "expected uniformizer in term");
            pos = c.eat('^') ? c.integer() : 1;
        }
        if (pos < 0 || pos >= cfg.precision) fail(errc::syntax_error, "digit position outside precision window");
        ds[pos] = coef;
        if (c.eat(')')) done = true;
        else if (!c.eat('+')) fail(errc::syntax_error, "expected + or ) in digit list");
    }
    c.skip_ws();
    if (c.i != c.s.size()) fail(errc::syntax_error, "trailing characters in local-field literal");
    return from_digits(cfg, val, std::move(ds));
}

} // namespace nasp
