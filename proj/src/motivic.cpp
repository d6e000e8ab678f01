#include "nasp/motivic.hpp"

#include <algorithm>
#include <sstream>

namespace nasp {

LPoly LPoly::term(const mpz_class& c, long e) {
    LPoly t;
    if (c != 0) t.coeffs[e] = c;
    return t;
}

LPoly operator+(const LPoly& a, const LPoly& b) {
    LPoly r = a;
    for (const auto& [e, c] : b.coeffs) {
        r.coeffs[e] += c;
        if (r.coeffs[e] == 0) r.coeffs.erase(e);
    }
    return r;
}

LPoly operator*(const LPoly& a, const LPoly& b) {
    LPoly r;
    for (const auto& [ea, ca] : a.coeffs)
        for (const auto& [eb, cb] : b.coeffs) {
            r.coeffs[ea + eb] += ca * cb;
            if (r.coeffs[ea + eb] == 0) r.coeffs.erase(ea + eb);
        }
    return r;
}

mpq_class LPoly::specialize(long p) const {
    mpq_class acc = 0;
    for (const auto& [e, c] : coeffs) {
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e < 0 ? -e : e));
        acc += e >= 0 ? mpq_class(c * pw) : mpq_class(c) / mpq_class(pw);
    }
    return acc;
}

std::string LPoly::to_string() const {
    if (coeffs.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        if (!first) os << " + ";
        os << it->second.get_str();
        if (it->first != 0) os << "*L^" << it->first;
        first = false;
    }
    return os.str();
}

StepFunction StepSpec::to_step(const FieldConfig& cfg) const {
    std::vector<Cell> out;
    for (const auto& c : cells) {
        std::vector<LocalNum> center;
        for (const auto& q : c.center) center.push_back(LocalNum::from_rational(cfg, q));
        out.push_back(Cell{Coset::from_point(center, c.depth), CycloNum::rational(cfg.p, c.value)});
    }
    return StepFunction(cfg, nvars, std::move(out));
}

Region RegionSpec::to_region(const FieldConfig& cfg) const {
    if (cosets.empty()) return Region::full(cfg, nvars);
    std::vector<Coset> out;
    for (const auto& c : cosets) {
        std::vector<LocalNum> center;
        for (const auto& q : c.center) center.push_back(LocalNum::from_rational(cfg, q));
        out.push_back(Coset::from_point(center, c.depth));
    }
    return Region(cfg, nvars, std::move(out));
}

namespace {

void add_prime_factors(std::set<long>& out, mpz_class v) {
    if (v < 0) v = -v;
    if (v <= 1) return;
    for (long d = 2; d <= 1'000'000 && v > 1; d += d == 2 ? 1 : 2) {
        while (mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(d))) {
            out.insert(d);
            v /= d;
        }
        if (mpz_class(d) * d > v && v > 1) {
            if (!v.fits_slong_p()) fail(errc::invalid_argument, "prime factor too large to record");
            out.insert(v.get_si());
            return;
        }
    }
    if (v > 1) {
        if (mpz_probab_prime_p(v.get_mpz_t(), 30) == 0 || !v.fits_slong_p())
            fail(errc::invalid_argument, "prime factor too large to record");
        out.insert(v.get_si());
    }
}

void add_rational_primes(std::set<long>& out, const mpq_class& q) {
    add_prime_factors(out, q.get_num());
    add_prime_factors(out, q.get_den());
}

} // namespace

UniformFormula uniform_normal_form(const QPoly& f, const std::vector<mpq_class>& x0) {
    int n = f.nvars;
    if (static_cast<int>(x0.size()) != n) fail(errc::invalid_argument, "critical point arity mismatch");
    for (const auto& g : f.gradient_at(x0))
        if (g != 0) fail(errc::not_critical_over_q, "x0 is not a critical point of f over Q");
    auto H = f.hessian_at(x0);
    // det via fraction-free elimination on a copy.
    std::vector<std::vector<mpq_class>> D = H;
    mpq_class det = 1;
    for (size_t c = 0; c < D.size(); ++c) {
        size_t piv = c;
        while (piv < D.size() && D[piv][c] == 0) ++piv;
        if (piv == D.size()) {
            det = 0;
            break;
        }
        if (piv != c) {
            std::swap(D[piv], D[c]);
            det = -det;
        }
        det *= D[c][c];
        for (size_t r = c + 1; r < D.size(); ++r) {
            mpq_class m = D[r][c] / D[c][c];
            for (size_t k = c; k < D.size(); ++k) D[r][k] -= m * D[c][k];
        }
    }
    if (det == 0) fail(errc::degenerate_hessian_over_q, "det Hess f(x0) = 0 over Q");

    UniformFormula uf;
    uf.nvars = n;
    uf.x0 = x0;
    uf.f_at_x0 = f.eval(x0);
    uf.bad_primes.insert(2);
    add_rational_primes(uf.bad_primes, det);
    add_prime_factors(uf.bad_primes, uf.f_at_x0.get_den());
    for (const auto& q : x0) add_prime_factors(uf.bad_primes, q.get_den());
    for (const auto& [m, c] : f.coeffs) add_prime_factors(uf.bad_primes, c.get_den());

    // LDL over Q mirroring the local pivot rule: swap in a nonzero diagonal,
    // else shear a nonzero off-diagonal onto the diagonal. Every nonzero
    // entry of a stage block contributes its primes, so good-prime
    // specializations take exactly the same branch.
    std::vector<std::vector<mpq_class>> W = H;
    for (auto& row : W)
        for (auto& e : row) e /= 2;
    for (size_t i = 0; i < W.size(); ++i) {
        for (size_t r = i; r < W.size(); ++r)
            for (size_t c = i; c < W.size(); ++c)
                if (W[r][c] != 0) add_rational_primes(uf.bad_primes, W[r][c]);
        if (W[i][i] == 0) {
            bool fixed = false;
            for (size_t j = i; j < W.size() && !fixed; ++j)
                if (W[j][j] != 0) {
                    for (size_t r = 0; r < W.size(); ++r) std::swap(W[r][i], W[r][j]);
                    std::swap(W[i], W[j]);
                    fixed = true;
                }
            for (size_t j = i; j < W.size() && !fixed; ++j)
                for (size_t k = j + 1; k < W.size() && !fixed; ++k)
                    if (W[j][k] != 0) {
                        for (size_t r = 0; r < W.size(); ++r) W[r][k] += W[r][j];
                        for (size_t c = 0; c < W.size(); ++c) W[k][c] += W[j][c];
                        if (k != i) {
                            for (size_t r = 0; r < W.size(); ++r) std::swap(W[r][i], W[r][k]);
                            std::swap(W[i], W[k]);
                        }
                        fixed = true;
                    }
            if (!fixed) fail(errc::degenerate_hessian_over_q, "no nonzero pivot available");
        }
        uf.a.push_back(W[i][i]);
        add_rational_primes(uf.bad_primes, W[i][i]);
        for (size_t r = i + 1; r < W.size(); ++r)
            for (size_t c = i + 1; c < W.size(); ++c) W[r][c] -= W[i][r] * W[i][c] / W[i][i];
    }
    uf.alpha = 1;
    return uf;
}

CycloNum SpecializedRhs::value(const LocalNum& lambda, const CycloNum& phi_at_x0) const {
    CycloNum term = psi(lambda * f0) * phi_at_x0;
    for (const auto& ai : a) term = term * gauss_closed(lambda * ai, alpha);
    return term;
}

SpecializedRhs specialize(const UniformFormula& uf, const FieldConfig& cfg) {
    if (uf.bad_primes.count(cfg.p)) fail(errc::bad_prime, "prime is in the bad set of the uniform formula");
    SpecializedRhs rhs{cfg, LocalNum::from_rational(cfg, uf.f_at_x0), {}, uf.alpha};
    for (const auto& ai : uf.a) {
        LocalNum av = LocalNum::from_rational(cfg, ai);
        if (av.is_zero_to_precision() || av.ord() != 0) fail(errc::bad_prime, "specialized unit degenerates");
        rhs.a.push_back(std::move(av));
    }
    return rhs;
}

std::vector<UniformPrimeReport> check_uniform(const QPoly& f, const std::vector<mpq_class>& x0,
                                              const StepSpec& phi_spec, const RegionSpec& omega_spec,
                                              const std::vector<long>& primes, const UniformOptions& opts) {
    UniformFormula uf = uniform_normal_form(f, x0);
    std::vector<UniformPrimeReport> reports;
    for (long p : primes) {
        if (uf.bad_primes.count(p)) {
            for (Kind kind : opts.kinds) reports.push_back({p, kind, UniformStatus::bad_prime, 0, 0, "bad prime"});
            continue;
        }
        for (Kind kind : opts.kinds) {
            UniformPrimeReport rec{p, kind, UniformStatus::ok, 0, 0, ""};
            try {
                FieldConfig cfg = kind == Kind::padic ? FieldConfig::padic(p, opts.precision)
                                                      : FieldConfig::laurent(p, opts.precision);
                MultiSeries fp = f.to_series(cfg, opts.degree_cutoff);
                StepFunction phi = phi_spec.to_step(cfg);
                Region omega = omega_spec.to_region(cfg);
                auto cert = stationary_phase(fp, phi, omega, opts.budget);
                auto rhs = specialize(uf, cfg);
                rec.N = cert.N;

                // Local route and uniform route must agree on the certificate data.
                std::vector<LocalNum> x0p;
                for (const auto& q : x0) x0p.push_back(LocalNum::from_rational(cfg, q));
                if (cert.points.size() != 1 || cert.alpha != uf.alpha) {
                    rec.status = UniformStatus::mismatch;
                    rec.note = "certificate shape differs from the uniform formula";
                } else {
                    const auto& pt = cert.points[0];
                    bool same = true;
                    for (int i = 0; i < cert.nvars; ++i)
                        if (!(pt.md.center[static_cast<size_t>(i)] == x0p[static_cast<size_t>(i)])) same = false;
                    for (size_t i = 0; i < rhs.a.size(); ++i)
                        if (!(pt.md.units[i] == rhs.a[i])) same = false;
                    if (!same) {
                        rec.status = UniformStatus::mismatch;
                        rec.note = "specialized data differs from the local certificate";
                    }
                }
                if (rec.status == UniformStatus::ok) {
                    CycloNum phi_x0 = phi.eval(x0p);
                    for (int k = 0; k < opts.sweep_ords && rec.status == UniformStatus::ok; ++k) {
                        long o = cert.N - k;
                        for (long u = 1; u < p; ++u) {
                            LocalNum lambda = LocalNum::unit_rep(cfg, u, o);
                            CycloNum brute = oscillatory_brute(fp, phi, lambda, omega, {.budget = opts.budget});
                            CycloNum local = cert.closed_rhs(lambda);
                            CycloNum uniform = rhs.value(lambda, phi_x0);
                            if (!(brute == local) || !(local == uniform)) {
                                rec.status = UniformStatus::mismatch;
                                std::ostringstream os;
                                os << "disagreement at ord " << o << ", unit " << u;
                                rec.note = os.str();
                                break;
                            }
                            ++rec.lambdas_checked;
                        }
                    }
                }
            } catch (const Error& e) {
                rec.status = UniformStatus::failed;
                rec.note = e.what();
            }
            reports.push_back(std::move(rec));
        }
    }
    return reports;
}

} // namespace nasp
