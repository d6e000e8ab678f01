#include "nasp/cyclotomic.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace nasp {

long CycloNum::pow_l(long p, int level) {
    long r = 1;
    for (int i = 0; i < level; ++i) {
        if (r > (1L << 40) / p) fail(errc::depth_overflow, "cyclotomic level too large");
        r *= p;
    }
    return r;
}

long CycloNum::phi(long p, int level) { return level == 0 ? 1 : (p - 1) * pow_l(p, level - 1); }

CycloNum CycloNum::rational(long p, const mpq_class& q) {
    CycloNum v;
    v.p_ = p;
    v.level_ = 0;
    v.c_ = {q};
    return v;
}

CycloNum CycloNum::zeta_pow(long p, int level, long e) {
    long m = pow_l(p, level);
    e %= m;
    if (e < 0) e += m;
    if (level == 0) return one(p);
    std::vector<mpq_class> raw(static_cast<size_t>(m), mpq_class(0));
    raw[static_cast<size_t>(e)] = 1;
    return from_raw_exponents(p, level, std::move(raw));
}

CycloNum CycloNum::from_raw_exponents(long p, int level, std::vector<mpq_class> raw) {
    long m = pow_l(p, level);
    long ph = phi(p, level);
    assert(static_cast<long>(raw.size()) == m);
    // zeta^((p-1)p^(M-1) + r) = -(zeta^r + zeta^(r+p^(M-1)) + ... ), top block first.
    long block = level == 0 ? 1 : pow_l(p, level - 1);
    for (long e = m - 1; e >= ph; --e) {
        if (raw[e] == 0) continue;
        long r = e - ph;
        for (long j = 0; j < p - 1; ++j) raw[r + j * block] -= raw[e];
        raw[e] = 0;
    }
    raw.resize(static_cast<size_t>(ph));
    CycloNum v;
    v.p_ = p;
    v.level_ = level;
    v.c_ = std::move(raw);
    v.demote();
    return v;
}

void CycloNum::demote() {
    while (level_ > 0) {
        bool ok = true;
        if (level_ == 1) {
            for (size_t j = 1; j < c_.size(); ++j)
                if (c_[j] != 0) { ok = false; break; }
            if (!ok) return;
            c_.resize(1);
            level_ = 0;
            return;
        }
        for (size_t e = 0; e < c_.size(); ++e)
            if (e % static_cast<size_t>(p_) != 0 && c_[e] != 0) { ok = false; break; }
        if (!ok) return;
        long ph = phi(p_, level_ - 1);
        std::vector<mpq_class> down(static_cast<size_t>(ph), mpq_class(0));
        for (long j = 0; j < ph; ++j) down[j] = c_[static_cast<size_t>(j * p_)];
        c_ = std::move(down);
        --level_;
    }
}

CycloNum CycloNum::promoted(int level) const {
    if (level < level_) fail(errc::invalid_argument, "cannot promote downward");
    if (level == level_) return *this;
    long scale = pow_l(p_, level - level_);
    std::vector<mpq_class> up(static_cast<size_t>(phi(p_, level)), mpq_class(0));
    for (size_t e = 0; e < c_.size(); ++e)
        if (c_[e] != 0) up[e * static_cast<size_t>(scale)] = c_[e];
    CycloNum v;
    v.p_ = p_;
    v.level_ = level;
    v.c_ = std::move(up);
    return v; // already canonical: no demotion can apply unless input was non-canonical
}

bool CycloNum::is_zero() const {
    for (const auto& q : c_)
        if (q != 0) return false;
    return true;
}

const mpq_class& CycloNum::rational_value() const {
    if (level_ != 0) fail(errc::invalid_argument, "value is not rational");
    return c_[0];
}

void CycloNum::check_same_prime(const CycloNum& a, const CycloNum& b) {
    if (a.p_ != b.p_) fail(errc::prime_mismatch, "cyclotomic values over different primes");
}

CycloNum operator+(const CycloNum& a, const CycloNum& b) {
    CycloNum::check_same_prime(a, b);
    int L = std::max(a.level_, b.level_);
    CycloNum x = a.promoted(L), y = b.promoted(L);
    for (size_t e = 0; e < x.c_.size(); ++e) x.c_[e] += y.c_[e];
    x.demote();
    return x;
}

CycloNum CycloNum::operator-() const {
    CycloNum v = *this;
    for (auto& q : v.c_) q = -q;
    return v;
}

CycloNum operator-(const CycloNum& a, const CycloNum& b) { return a + (-b); }

CycloNum operator*(const CycloNum& a, const CycloNum& b) {
    CycloNum::check_same_prime(a, b);
    int L = std::max(a.level_, b.level_);
    if (L == 0) return CycloNum::rational(a.p_, a.c_[0] * b.c_[0]);
    CycloNum x = a.promoted(L), y = b.promoted(L);
    long m = CycloNum::pow_l(a.p_, L);
    std::vector<std::pair<long, const mpq_class*>> xs, ys;
    for (size_t e = 0; e < x.c_.size(); ++e)
        if (x.c_[e] != 0) xs.emplace_back(static_cast<long>(e), &x.c_[e]);
    for (size_t e = 0; e < y.c_.size(); ++e)
        if (y.c_[e] != 0) ys.emplace_back(static_cast<long>(e), &y.c_[e]);
    std::vector<mpq_class> raw(static_cast<size_t>(m), mpq_class(0));
    for (auto& [ea, qa] : xs)
        for (auto& [eb, qb] : ys) {
            long e = ea + eb;
            if (e >= m) e -= m;
            raw[static_cast<size_t>(e)] += *qa * *qb;
        }
    return CycloNum::from_raw_exponents(a.p_, L, std::move(raw));
}

CycloNum CycloNum::conj() const {
    if (level_ == 0) return *this;
    long m = pow_l(p_, level_);
    std::vector<mpq_class> raw(static_cast<size_t>(m), mpq_class(0));
    for (size_t e = 0; e < c_.size(); ++e) {
        if (c_[e] == 0) continue;
        long r = e == 0 ? 0 : m - static_cast<long>(e);
        raw[static_cast<size_t>(r)] += c_[e];
    }
    return from_raw_exponents(p_, level_, std::move(raw));
}

CycloNum CycloNum::scaled(const mpq_class& q) const {
    CycloNum v = *this;
    for (auto& c : v.c_) c *= q;
    v.demote();
    return v;
}

bool operator==(const CycloNum& a, const CycloNum& b) {
    CycloNum::check_same_prime(a, b);
    if (a.level_ != b.level_) return false; // canonical minimal levels
    return a.c_ == b.c_;
}

std::pair<double, double> CycloNum::embed_complex() const {
    double re = 0, im = 0;
    double m = static_cast<double>(pow_l(p_, level_));
    for (size_t e = 0; e < c_.size(); ++e) {
        if (c_[e] == 0) continue;
        double q = c_[e].get_d();
        double th = 2.0 * M_PI * static_cast<double>(e) / m;
        re += q * std::cos(th);
        im += q * std::sin(th);
    }
    return {re, im};
}

std::string CycloNum::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (size_t e = 0; e < c_.size(); ++e) {
        if (c_[e] == 0) continue;
        if (!first) os << " + ";
        os << c_[e].get_str();
        if (e > 0) os << "*z^" << e;
        first = false;
    }
    if (first) os << "0";
    if (level_ > 0) os << "  [z = zeta_" << p_ << "^" << level_ << "]";
    return os.str();
}

CharSumAccum::CharSumAccum(long p, int level) : p_(p), level_(level) {
    mod_ = CycloNum::pow_l(p, level);
    if (mod_ > (16L << 20)) fail(errc::depth_overflow, "character-sum table exceeds memory cap");
    counts_.assign(static_cast<size_t>(mod_), 0);
}

void CharSumAccum::add(long exponent, int64_t weight) {
    counts_[static_cast<size_t>(exponent)] += weight;
}

void CharSumAccum::add_scaled_int(const CycloNum& v, int64_t weight) { add_rotated(v, 0, weight); }

void CharSumAccum::add_rotated(const CycloNum& v, long rot, int64_t weight) {
    if (v.prime() != p_) fail(errc::prime_mismatch, "accumulator prime mismatch");
    if (v.level() > level_) fail(errc::invalid_argument, "accumulator level too small");
    long scale = CycloNum::pow_l(p_, level_ - v.level());
    const auto& c = v.coeffs();
    for (size_t e = 0; e < c.size(); ++e) {
        if (c[e] == 0) continue;
        size_t slot = static_cast<size_t>((static_cast<long>(e) * scale + rot) % mod_);
        mpq_class t = c[e] * weight;
        if (t.get_den() == 1 && t.get_num().fits_slong_p()) {
            counts_[slot] += t.get_num().get_si();
        } else {
            if (acc_.empty()) acc_.assign(static_cast<size_t>(mod_), mpq_class(0));
            acc_[slot] += t;
        }
    }
}

CycloNum CharSumAccum::finish(const mpq_class& scale) const {
    std::vector<mpq_class> raw(static_cast<size_t>(mod_), mpq_class(0));
    for (size_t e = 0; e < raw.size(); ++e) {
        if (counts_[e] != 0) raw[e] = mpq_class(counts_[e]);
        if (!acc_.empty() && acc_[e] != 0) raw[e] += acc_[e];
        if (raw[e] != 0) raw[e] *= scale;
    }
    return CycloNum::from_raw_exponents(p_, level_, std::move(raw));
}

} // namespace nasp
