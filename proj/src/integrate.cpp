#include "nasp/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <type_traits>

namespace nasp {

CycloNum integrate_step(const StepFunction& phi) {
    CycloNum acc = CycloNum::zero(phi.config().p);
    for (const auto& cell : phi.cells()) acc = acc + cell.value.scaled(cell.coset.volume(phi.config().p));
    return acc;
}

namespace {

// ---- modular character kernels ---------------------------------------------
//
// At level M, for z with ord z >= 1 - M and w integral,
//   Psi(z w) = zeta_{p^M} ^ (charres(z) * (w mod p^M))      (padic)
//   Psi(z w) = zeta_p ^ (sum_b charres(z)[b] * w_b)         (laurent)
// where charres(z) collects the digits of z that can reach position 0.

struct PadicRing {
    long p;
    int M;
    long mod; // p^M

    using Elem = long;
    using CharRes = long;

    long pow_mod(long b, long e) const {
        long r = 1 % mod;
        for (long i = 0; i < e; ++i) r = static_cast<long>((__int128)r * b % mod);
        return r;
    }
    Elem zero() const { return 0; }
    Elem from_local(const LocalNum& x) const {
        if (x.is_zero()) return 0;
        if (x.ord_floor() < 0) fail(errc::invalid_argument, "residue of a non-integral value");
        if (x.known_floor() < M) fail(errc::precision_exhausted, "residue needs more digits");
        long r = 0;
        for (long pos = M - 1; pos >= 0; --pos) r = static_cast<long>(((__int128)r * p + x.digit_at(pos)) % mod);
        return r;
    }
    CharRes charres(const LocalNum& z) const {
        if (z.is_zero()) return 0;
        if (z.known_floor() < 1) fail(errc::precision_exhausted, "character argument needs digits to position 0");
        long r = 0;
        for (long pos = 0; pos >= 1 - M; --pos)
            r = (r + static_cast<long>((__int128)z.digit_at(pos) * pow_mod(p, M - 1 + pos) % mod)) % mod;
        return r;
    }
    Elem add(Elem a, Elem b) const { return (a + b) % mod; }
    Elem mul(Elem a, Elem b) const { return static_cast<long>((__int128)a * b % mod); }
    int ord_res(Elem a) const { // capped at M
        if (a == 0) return M;
        int v = 0;
        while (a % p == 0) { a /= p; ++v; }
        return v;
    }
    long exponent(CharRes lam, Elem fc) const { return static_cast<long>((__int128)lam * fc % mod); }
    Elem bump(Elem base, int64_t digit, long k) const {
        if (k >= M) return base;
        return add(base, mul(static_cast<long>(digit), pow_mod(p, k)));
    }
};

struct LaurentRing {
    long p;
    int M;

    struct Elem {
        std::vector<int64_t> c; // coefficients of t^0..t^(M-1)
    };
    using CharRes = std::vector<int64_t>;

    Elem zero() const { return Elem{std::vector<int64_t>(static_cast<size_t>(M), 0)}; }
    Elem from_local(const LocalNum& x) const {
        Elem e = zero();
        if (x.is_zero()) return e;
        if (x.known_floor() < M) fail(errc::precision_exhausted, "residue needs more digits");
        for (int i = 0; i < M; ++i) e.c[static_cast<size_t>(i)] = x.digit_at(i);
        return e;
    }
    CharRes charres(const LocalNum& z) const {
        CharRes r(static_cast<size_t>(M), 0);
        if (z.is_zero()) return r;
        if (z.known_floor() < 1) fail(errc::precision_exhausted, "character argument needs digits to position 0");
        for (int b = 0; b < M; ++b) r[static_cast<size_t>(b)] = z.digit_at(-b);
        return r;
    }
    Elem add(const Elem& a, const Elem& b) const {
        Elem r = a;
        for (int i = 0; i < M; ++i)
            r.c[static_cast<size_t>(i)] = (r.c[static_cast<size_t>(i)] + b.c[static_cast<size_t>(i)]) % p;
        return r;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        Elem r = zero();
        for (int i = 0; i < M; ++i) {
            if (a.c[static_cast<size_t>(i)] == 0) continue;
            for (int j = 0; i + j < M; ++j)
                r.c[static_cast<size_t>(i + j)] =
                    (r.c[static_cast<size_t>(i + j)] + a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(j)]) % p;
        }
        return r;
    }
    int ord_res(const Elem& a) const {
        for (int i = 0; i < M; ++i)
            if (a.c[static_cast<size_t>(i)] != 0) return i;
        return M;
    }
    long exponent(const CharRes& lam, const Elem& fc) const {
        long e = 0;
        for (int b = 0; b < M; ++b) e += lam[static_cast<size_t>(b)] * fc.c[static_cast<size_t>(b)];
        return e % p;
    }
    Elem bump(const Elem& base, int64_t digit, long k) const {
        Elem e = base;
        if (k < M) e.c[static_cast<size_t>(k)] = digit;
        return e;
    }
};

template <class Ring> int accum_level(const Ring& r) {
    if constexpr (std::is_same_v<Ring, LaurentRing>) return r.M > 0 ? 1 : 0;
    else return r.M;
}

template <class Ring>
struct KernelPoly {
    std::vector<std::pair<Monomial, typename Ring::Elem>> terms;

    static KernelPoly from_series(const Ring& r, const MultiSeries& s) {
        KernelPoly k;
        for (const auto& [m, c] : s.coeffs()) {
            if (c.is_zero_to_precision() && c.ord_floor() >= r.M) continue;
            k.terms.emplace_back(m, r.from_local(c));
        }
        return k;
    }

    typename Ring::Elem eval(const Ring& r, const std::vector<typename Ring::Elem>& x) const {
        typename Ring::Elem acc = r.zero();
        for (const auto& [m, c] : terms) {
            auto t = c;
            for (size_t i = 0; i < x.size(); ++i)
                for (int e = 0; e < m[i]; ++e) t = r.mul(t, x[i]);
            acc = r.add(acc, t);
        }
        return acc;
    }
};

struct BruteBudget {
    long long used = 0;
    long long cap;
    void tick() {
        if (++used > cap) fail(errc::depth_overflow, "coset enumeration budget exceeded");
    }
};

// Exact integration of Psi(lambda f) over a coset c + (w^k O)^n, with
// integral Taylor coefficients and ord lambda = v:
//   * if 1 - v - k <= 0, the integrand is constant on the coset;
//   * else if 1 - v - 2k <= 0, the quadratic tail is invisible to Psi and
//     int_coset Psi(lambda f) = Psi(lambda f(c)) vol prod_i [ord(lambda g_i(c)) + k >= 1];
//     the product vanishes unless min_i ord g_i(c) >= 1 - v - k, in which
//     case the integrand was constant anyway;
//   * otherwise split into the p^n children.
// Flat mode ignores the shortcuts and enumerates to the guaranteed depth.
template <class Ring>
struct BruteEngine {
    const Ring& ring;
    const KernelPoly<Ring>& f;
    const std::vector<KernelPoly<Ring>>& grads;
    typename Ring::CharRes lam_res;
    long v;
    bool flat;
    long m_flat;
    BruteBudget& budget;
    CharSumAccum& acc;
    long kref;
    int n;

    void contribute(const std::vector<typename Ring::Elem>& c, long k) {
        long e = ring.exponent(lam_res, f.eval(ring, c));
        long long w = 1;
        bool fits = true;
        for (long i = 0; i < (kref - k) * n; ++i) {
            if (w > (1LL << 61) / ring.p) { fits = false; break; }
            w *= ring.p;
        }
        if (fits) {
            acc.add(e, w);
        } else {
            mpz_class big;
            mpz_ui_pow_ui(big.get_mpz_t(), static_cast<unsigned long>(ring.p),
                          static_cast<unsigned long>((kref - k) * n));
            acc.add_rotated(CycloNum::rational(ring.p, mpq_class(big)), e, 1);
        }
    }

    void visit(const std::vector<typename Ring::Elem>& c, long k) {
        budget.tick();
        if (flat ? k >= m_flat : 1 - v - k <= 0) {
            contribute(c, k);
            return;
        }
        if (!flat && 1 - v - 2 * k <= 0) {
            long g = ring.M;
            for (const auto& gp : grads) g = std::min<long>(g, ring.ord_res(gp.eval(ring, c)));
            if (g >= 1 - v - k) contribute(c, k);
            return; // otherwise the full linear character sum vanishes
        }
        std::vector<typename Ring::Elem> child = c;
        std::vector<int64_t> digit(static_cast<size_t>(n), 0);
        while (true) {
            for (int i = 0; i < n; ++i)
                child[static_cast<size_t>(i)] = ring.bump(c[static_cast<size_t>(i)], digit[static_cast<size_t>(i)], k);
            visit(child, k + 1);
            int i = 0;
            while (i < n && ++digit[static_cast<size_t>(i)] == ring.p) digit[static_cast<size_t>(i++)] = 0;
            if (i == n) break;
        }
    }
};

std::vector<Cell> phi_pieces(const StepFunction& phi, const Region& omega) {
    if (!omega.contains_support(phi)) fail(errc::support_mismatch, "supp phi must lie inside Omega");
    std::vector<Cell> pieces;
    for (const auto& cell : phi.cells())
        for (const auto& r : omega.cosets()) {
            if (!cell.coset.meets(r)) continue;
            const Coset& deeper = cell.coset.depth >= r.depth ? cell.coset : r;
            pieces.push_back(Cell{deeper, cell.value});
        }
    return pieces;
}

template <class Ring>
CycloNum brute_sum(const Ring& ring, const MultiSeries& f, const std::vector<Cell>& pieces, const LocalNum& lambda,
                   long v, const BruteOptions& opts) {
    const FieldConfig& cfg = f.config();
    int n = f.nvars();
    auto fk = KernelPoly<Ring>::from_series(ring, f);
    std::vector<KernelPoly<Ring>> grads;
    for (int i = 0; i < n; ++i) grads.push_back(KernelPoly<Ring>::from_series(ring, f.derivative(i)));
    auto lam_res = ring.charres(lambda);
    BruteBudget budget{0, opts.budget};
    CycloNum total = CycloNum::zero(cfg.p);
    long min_f_ord = std::min(f.min_coeff_ord_floor(), static_cast<long>(ring.M));
    for (const auto& piece : pieces) {
        long k0 = piece.coset.depth;
        long m_flat = std::max({k0, 1 - v - min_f_ord, psi_square_depth(lambda)}) + (opts.flat ? opts.extra_depth : 0);
        long split_cap = (2 - v) / 2 + 1; // deepest level the adaptive rule can split to
        long kref = std::max(k0, opts.flat ? m_flat : split_cap);
        CharSumAccum acc(cfg.p, accum_level(ring));
        BruteEngine<Ring> eng{ring, fk, grads, lam_res, v, opts.flat, m_flat, budget, acc, kref, n};
        auto rep = piece.coset.representative(cfg);
        std::vector<typename Ring::Elem> c0;
        for (const auto& xi : rep) c0.push_back(ring.from_local(xi));
        eng.visit(c0, k0);
        mpz_class denom;
        mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(cfg.p), static_cast<unsigned long>(kref * n));
        total = total + acc.finish(mpq_class(1, denom)) * piece.value;
    }
    return total;
}

} // namespace

CycloNum oscillatory_brute(const MultiSeries& f, const StepFunction& phi, const LocalNum& lambda,
                           const Region& omega, const BruteOptions& opts) {
    const FieldConfig& cfg = f.config();
    if (!(phi.config() == cfg) || !(omega.config() == cfg) || !(lambda.config() == cfg))
        fail(errc::config_mismatch, "oscillatory integral inputs disagree on the field");
    if (!f.truncation_free()) fail(errc::invalid_argument, "oscillatory_brute needs a polynomial phase");
    if (f.nvars() != phi.nvars() || phi.nvars() != omega.nvars()) fail(errc::invalid_argument, "arity mismatch");
    auto pieces = phi_pieces(phi, omega);
    // ord lambda >= 1 (or lambda = 0) makes the character factor identically 1.
    bool trivial = lambda.is_zero() || lambda.ord_floor() >= 1;
    if (!trivial && lambda.is_pseudo_zero())
        fail(errc::precision_exhausted, "lambda vanishes to working precision");
    if (trivial) {
        CycloNum acc = CycloNum::zero(cfg.p);
        for (const auto& piece : pieces) acc = acc + piece.value.scaled(piece.coset.volume(cfg.p));
        return acc;
    }
    long v = lambda.ord();
    int M = static_cast<int>(1 - v);
    if (cfg.kind == Kind::padic) {
        PadicRing ring{cfg.p, M, CycloNum::pow_l(cfg.p, M)};
        return brute_sum(ring, f, pieces, lambda, v, opts);
    }
    LaurentRing ring{cfg.p, M};
    return brute_sum(ring, f, pieces, lambda, v, opts);
}

// ---- Fourier transform -------------------------------------------------------

namespace {

int64_t window_value(const Coset& c, int i, long lo, long hi, long p) {
    int64_t v = 0;
    for (long pos = hi - 1; pos >= lo; --pos) v = v * p + c.digit(i, pos);
    return v;
}

} // namespace

StepFunction fourier(const StepFunction& phi) {
    const FieldConfig& cfg = phi.config();
    int n = phi.nvars();
    if (phi.is_zero()) return StepFunction::zero(cfg, n);

    // Output support floor L, output resolution e_out: fine enough that both
    // every indicator 1_{(w^(1-d) O)^n} and every modulation Psi(<c, .>) are
    // constant on output cells.
    long L = LocalNum::kInfOrd, e_out = -LocalNum::kInfOrd;
    for (const auto& cell : phi.cells()) {
        long s = 1 - cell.coset.depth;
        L = std::min(L, s);
        e_out = std::max(e_out, s);
        for (int i = 0; i < n; ++i)
            for (long pos = cell.coset.base; pos < cell.coset.depth; ++pos)
                if (cell.coset.digit(i, pos) != 0) {
                    e_out = std::max(e_out, 1 - pos);
                    break;
                }
    }
    e_out = std::max(e_out, L);
    long width = e_out - L;
    if (width * n * std::log2(static_cast<double>(cfg.p)) > 22.5)
        fail(errc::depth_overflow, "Fourier grid too large");

    long min_cb = 0;
    for (const auto& cell : phi.cells()) min_cb = std::min(min_cb, cell.coset.base);
    int M = static_cast<int>(std::max(0L, 1 - (min_cb + L)));
    long mod = CycloNum::pow_l(cfg.p, M);
    int char_level = cfg.kind == Kind::padic ? M : (M > 0 ? 1 : 0);
    int out_level = char_level;
    for (const auto& cell : phi.cells()) out_level = std::max(out_level, cell.value.level());
    long rot_scale = CycloNum::pow_l(cfg.p, out_level - char_level);

    long dmax = phi.max_depth();
    struct Prepared {
        std::vector<int64_t> C;                    // padic window integers
        std::vector<std::vector<int64_t>> digits;  // laurent windows
        long cb;
        long s; // the cell's transform lives on (w^s O)^n
        CycloNum w;
        std::vector<std::pair<long, int64_t>> w_int; // raw-exponent integer form
        bool fast = false;
    };
    std::vector<Prepared> prep;
    // Common denominator so the hot accumulation runs on int64 counts.
    mpz_class common_den = 1;
    for (const auto& cell : phi.cells())
        for (const auto& q : cell.value.coeffs()) mpz_lcm(common_den.get_mpz_t(), common_den.get_mpz_t(), q.get_den().get_mpz_t());
    for (const auto& cell : phi.cells()) {
        Prepared pr;
        pr.cb = cell.coset.base;
        pr.s = 1 - cell.coset.depth;
        if (cfg.kind == Kind::padic) {
            for (int i = 0; i < n; ++i) pr.C.push_back(window_value(cell.coset, i, pr.cb, cell.coset.depth, cfg.p));
        } else {
            for (int i = 0; i < n; ++i) {
                std::vector<int64_t> d;
                for (long pos = pr.cb; pos < cell.coset.depth; ++pos) d.push_back(cell.coset.digit(i, pos));
                pr.digits.push_back(std::move(d));
            }
        }
        mpz_class weight;
        mpz_ui_pow_ui(weight.get_mpz_t(), static_cast<unsigned long>(cfg.p),
                      static_cast<unsigned long>(n * (dmax - cell.coset.depth)));
        pr.w = cell.value.scaled(mpq_class(weight * common_den));
        pr.fast = true;
        long lvl_scale = CycloNum::pow_l(cfg.p, out_level - pr.w.level());
        for (size_t e = 0; e < pr.w.coeffs().size() && pr.fast; ++e) {
            const mpq_class& q = pr.w.coeffs()[e];
            if (q == 0) continue;
            if (q.get_den() != 1 || !q.get_num().fits_slong_p()) {
                pr.fast = false;
                break;
            }
            pr.w_int.emplace_back(static_cast<long>(e) * lvl_scale, q.get_num().get_si());
        }
        prep.push_back(std::move(pr));
    }
    mpz_class denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(cfg.p), static_cast<unsigned long>(n * dmax));
    mpq_class scale = mpq_class(1, denom) / mpq_class(common_den);
    long out_mod = CycloNum::pow_l(cfg.p, out_level);

    std::vector<Cell> out;
    Coset xi;
    xi.base = L;
    xi.depth = e_out;
    xi.center.assign(static_cast<size_t>(n), std::vector<int64_t>(static_cast<size_t>(width), 0));
    std::vector<int64_t> odo(static_cast<size_t>(n * width), 0);
    std::vector<int64_t> X(static_cast<size_t>(n), 0);
    while (true) {
        for (int i = 0; i < n; ++i)
            for (long k = 0; k < width; ++k)
                xi.center[static_cast<size_t>(i)][static_cast<size_t>(k)] = odo[static_cast<size_t>(i * width + k)];
        if (cfg.kind == Kind::padic)
            for (int i = 0; i < n; ++i) X[static_cast<size_t>(i)] = window_value(xi, i, L, e_out, cfg.p);
        CharSumAccum acc(cfg.p, out_level);
        bool touched = false;
        for (const auto& pr : prep) {
            bool inside = true;
            for (int i = 0; i < n && inside; ++i)
                for (long pos = L; pos < std::min(pr.s, e_out); ++pos)
                    if (xi.digit(i, pos) != 0) {
                        inside = false;
                        break;
                    }
            if (!inside) continue;
            long e = 0;
            if (M > 0 && cfg.kind == Kind::padic) {
                __int128 sum = 0;
                for (int i = 0; i < n; ++i) sum += (__int128)pr.C[static_cast<size_t>(i)] * X[static_cast<size_t>(i)];
                long shift = M - 1 + pr.cb + L;
                __int128 r = sum % mod;
                if (r < 0) r += mod;
                for (long t = 0; t < shift && r != 0; ++t) r = r * cfg.p % mod;
                e = static_cast<long>(r);
            } else if (M > 0) {
                long s = 0;
                for (int i = 0; i < n; ++i) {
                    const auto& D = pr.digits[static_cast<size_t>(i)];
                    for (long a = 0; a < static_cast<long>(D.size()); ++a) {
                        long need = -(pr.cb + a); // xi position pairing to t^0
                        if (need >= L && need < e_out) s += D[static_cast<size_t>(a)] * xi.digit(i, need);
                    }
                }
                e = s % cfg.p;
            }
            long rot = e * rot_scale;
            if (pr.fast) {
                for (const auto& [ev, cv] : pr.w_int) {
                    long slot = ev + rot;
                    if (slot >= out_mod) slot -= out_mod;
                    acc.add(slot, cv);
                }
            } else {
                acc.add_rotated(pr.w, rot, 1);
            }
            touched = true;
        }
        if (touched) {
            CycloNum value = acc.finish(scale);
            if (!value.is_zero()) out.push_back(Cell{xi.normalized(), value});
        }
        int i = 0;
        while (i < n * width && ++odo[static_cast<size_t>(i)] == cfg.p) odo[static_cast<size_t>(i++)] = 0;
        if (i == n * width) break;
    }
    return StepFunction(cfg, n, std::move(out)).merged();
}

bool step_equal(const StepFunction& a, const StepFunction& b) {
    return (a + b.scaled(-CycloNum::one(a.config().p))).is_zero();
}

bool plancherel_check(const StepFunction& f, const StepFunction& g) {
    CycloNum lhs = integrate_step(fourier(f).product(g));
    CycloNum rhs = integrate_step(f.product(fourier(g)));
    return lhs == rhs;
}

DoubleFourierReport double_fourier_check(const StepFunction& phi, const StepFunction& partner) {
    const FieldConfig& cfg = phi.config();
    StepFunction hh = fourier(fourier(phi));
    StepFunction refl = phi.reflected();

    mpz_class qn;
    mpz_ui_pow_ui(qn.get_mpz_t(), static_cast<unsigned long>(cfg.p), static_cast<unsigned long>(phi.nvars()));
    mpq_class kappa(1, qn);
    bool ok = step_equal(hh, refl.scaled(CycloNum::rational(cfg.p, kappa)));
    if (!ok && !phi.is_zero()) {
        // Try to identify some other exact scalar from a rational-valued cell.
        bool found = false;
        for (const auto& cell : refl.cells()) {
            if (!cell.value.is_rational() || cell.value.is_zero()) continue;
            CycloNum h = hh.eval(cell.coset.representative(cfg));
            if (!h.is_rational()) break;
            kappa = h.rational_value() / cell.value.rational_value();
            found = true;
            break;
        }
        if (!found || !step_equal(hh, refl.scaled(CycloNum::rational(cfg.p, kappa))))
            fail(errc::constant_not_scalar, "double transform is not a scalar multiple of the reflection");
        ok = true;
    }
    return DoubleFourierReport{kappa, ok, plancherel_check(phi, partner), hh};
}

// ---- Gauss integrals ---------------------------------------------------------

CycloNum gauss_brute(const LocalNum& c, long alpha, long long budget) {
    const FieldConfig& cfg = c.config();
    if (alpha < 0) fail(errc::invalid_argument, "alpha must be >= 0");
    mpz_class pa;
    mpz_ui_pow_ui(pa.get_mpz_t(), static_cast<unsigned long>(cfg.p), static_cast<unsigned long>(alpha));
    mpq_class vol(1, pa);
    if (c.is_zero()) return CycloNum::rational(cfg.p, vol);
    LocalNum cp = c.shift(2 * alpha);
    if (cp.is_pseudo_zero() && cp.ord_floor() < 1) fail(errc::precision_exhausted, "coefficient too imprecise");
    if (cp.is_pseudo_zero() || cp.ord() >= 1) return CycloNum::rational(cfg.p, vol);
    long beta = psi_square_depth(cp);
    double count = static_cast<double>(beta) * std::log2(static_cast<double>(cfg.p));
    if (count > 62 || CycloNum::pow_l(cfg.p, static_cast<int>(beta)) > budget)
        fail(errc::depth_overflow, "Gauss enumeration budget exceeded");
    long v = cp.ord();
    int M = static_cast<int>(std::max(0L, 1 - v));
    long total = CycloNum::pow_l(cfg.p, static_cast<int>(beta));
    CharSumAccum acc(cfg.p, cfg.kind == Kind::padic ? M : 1);
    if (cfg.kind == Kind::padic) {
        PadicRing ring{cfg.p, M, CycloNum::pow_l(cfg.p, M)};
        long cr = ring.charres(cp);
        long betam = std::min<long>(beta, M);
        long wcount = CycloNum::pow_l(cfg.p, static_cast<int>(betam));
        long reps = total / wcount;
        for (long w = 0; w < wcount; ++w) acc.add(ring.exponent(cr, ring.mul(w, w)), reps);
    } else {
        LaurentRing ring{cfg.p, M};
        auto cr = ring.charres(cp);
        long betam = std::min<long>(beta, M);
        long reps = total / CycloNum::pow_l(cfg.p, static_cast<int>(betam));
        std::vector<int64_t> digits(static_cast<size_t>(betam), 0);
        while (true) {
            auto w = ring.zero();
            for (long i = 0; i < betam; ++i) w.c[static_cast<size_t>(i)] = digits[static_cast<size_t>(i)];
            acc.add(ring.exponent(cr, ring.mul(w, w)), reps);
            size_t i = 0;
            while (i < digits.size() && ++digits[i] == cfg.p) digits[i++] = 0;
            if (i == digits.size()) break;
        }
    }
    mpz_class pb;
    mpz_ui_pow_ui(pb.get_mpz_t(), static_cast<unsigned long>(cfg.p), static_cast<unsigned long>(beta));
    return acc.finish(vol / mpq_class(pb));
}

CycloNum gauss_closed(const LocalNum& c, long alpha) {
    const FieldConfig& cfg = c.config();
    if (alpha < 0) fail(errc::invalid_argument, "alpha must be >= 0");
    mpz_class pa;
    mpz_ui_pow_ui(pa.get_mpz_t(), static_cast<unsigned long>(cfg.p), static_cast<unsigned long>(alpha));
    mpq_class vol(1, pa);
    if (c.is_zero()) return CycloNum::rational(cfg.p, vol);
    if (c.is_pseudo_zero()) {
        if (c.ord_floor() + 2 * alpha >= 1) return CycloNum::rational(cfg.p, vol);
        fail(errc::precision_exhausted, "coefficient too imprecise");
    }
    long s = c.ord() + 2 * alpha;
    // G(s) = p^-1 G(s+2) for s <= -1; base cases G(s>=1) = 1, G(0) finite sum.
    long halvings = 0;
    while (s <= -1) {
        ++halvings;
        s += 2;
    }
    CycloNum g0 = CycloNum::one(cfg.p);
    if (s == 0) {
        long a0 = c.ac();
        CharSumAccum acc(cfg.p, 1);
        for (long x = 0; x < cfg.p; ++x) acc.add(a0 * x * x % cfg.p, 1);
        g0 = acc.finish(mpq_class(1, cfg.p));
    }
    mpz_class ph;
    mpz_ui_pow_ui(ph.get_mpz_t(), static_cast<unsigned long>(cfg.p), static_cast<unsigned long>(halvings));
    return g0.scaled(vol / mpq_class(ph));
}

CycloNum gauss_brute_shifted(const LocalNum& a, const LocalNum& b, long alpha, long long budget) {
    const FieldConfig& cfg = a.config();
    if (a.is_zero() || b.is_zero()) fail(errc::invalid_argument, "gauss_brute_shifted needs a, b nonzero");
    LocalNum ap = a.shift(2 * alpha), bp = b.shift(alpha);
    long beta = std::max({0L, 1 - ap.ord(), 1 - bp.ord()});
    if (static_cast<double>(beta) * std::log2(static_cast<double>(cfg.p)) > 62 ||
        CycloNum::pow_l(cfg.p, static_cast<int>(beta)) > budget)
        fail(errc::depth_overflow, "Gauss enumeration budget exceeded");
    int M = static_cast<int>(std::max({0L, 1 - ap.ord(), 1 - bp.ord()}));
    mpz_class pa, pb;
    mpz_ui_pow_ui(pa.get_mpz_t(), static_cast<unsigned long>(cfg.p), static_cast<unsigned long>(alpha));
    mpz_ui_pow_ui(pb.get_mpz_t(), static_cast<unsigned long>(cfg.p), static_cast<unsigned long>(beta));
    mpq_class scale = mpq_class(1, pa) / mpq_class(pb);
    if (M == 0) return CycloNum::rational(cfg.p, mpq_class(1, pa));
    long total = CycloNum::pow_l(cfg.p, static_cast<int>(beta));
    CharSumAccum acc(cfg.p, cfg.kind == Kind::padic ? M : 1);
    if (cfg.kind == Kind::padic) {
        PadicRing ring{cfg.p, M, CycloNum::pow_l(cfg.p, M)};
        long ar = ring.charres(ap), br = ring.charres(bp);
        long betam = std::min<long>(beta, M);
        long wcount = CycloNum::pow_l(cfg.p, static_cast<int>(betam));
        long reps = total / wcount;
        for (long w = 0; w < wcount; ++w) {
            long e = (ring.exponent(ar, ring.mul(w, w)) + ring.exponent(br, w)) % ring.mod;
            acc.add(e, reps);
        }
    } else {
        LaurentRing ring{cfg.p, M};
        auto ar = ring.charres(ap);
        auto br = ring.charres(bp);
        long betam = std::min<long>(beta, M);
        long reps = total / CycloNum::pow_l(cfg.p, static_cast<int>(betam));
        std::vector<int64_t> digits(static_cast<size_t>(betam), 0);
        while (true) {
            auto w = ring.zero();
            for (long i = 0; i < betam; ++i) w.c[static_cast<size_t>(i)] = digits[static_cast<size_t>(i)];
            long e = (ring.exponent(ar, ring.mul(w, w)) + ring.exponent(br, w)) % cfg.p;
            acc.add(e, reps);
            size_t i = 0;
            while (i < digits.size() && ++digits[i] == cfg.p) digits[i++] = 0;
            if (i == digits.size()) break;
        }
    }
    return acc.finish(scale);
}

bool gauss_shift_invariance(const LocalNum& a, const LocalNum& b, long alpha, long long budget) {
    return gauss_brute_shifted(a, b, alpha, budget) == gauss_brute(a, alpha, budget);
}

} // namespace nasp
