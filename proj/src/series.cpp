#include "nasp/series.hpp"

#include <algorithm>
#include <sstream>

namespace nasp {

MultiSeries::MultiSeries(FieldConfig cfg, int nvars, int degree_cutoff)
    : cfg_(cfg), nvars_(nvars), cutoff_(degree_cutoff) {
    if (nvars < 1) fail(errc::invalid_argument, "nvars must be >= 1");
    if (degree_cutoff < 2) fail(errc::invalid_argument, "degree cutoff must be >= 2");
}

MultiSeries MultiSeries::constant(FieldConfig cfg, int nvars, int cutoff, const LocalNum& c) {
    MultiSeries s(cfg, nvars, cutoff);
    s.add_term(Monomial(static_cast<size_t>(nvars), 0), c);
    return s;
}

MultiSeries MultiSeries::variable(FieldConfig cfg, int nvars, int cutoff, int i) {
    MultiSeries s(cfg, nvars, cutoff);
    Monomial m(static_cast<size_t>(nvars), 0);
    m[static_cast<size_t>(i)] = 1;
    s.add_term(m, LocalNum::from_integer(cfg, 1));
    return s;
}

void MultiSeries::add_term(const Monomial& m, const LocalNum& c) {
    if (static_cast<int>(m.size()) != nvars_) fail(errc::invalid_argument, "monomial arity mismatch");
    if (total_degree(m) > cutoff_) return;
    if (c.is_zero()) return;
    if (c.ord_floor() < 0) fail(errc::non_integral_coefficient, "series coefficient with negative valuation");
    auto it = c_.find(m);
    if (it == c_.end()) {
        c_.emplace(m, c);
        return;
    }
    LocalNum s = it->second + c;
    if (s.is_zero())
        c_.erase(it);
    else
        it->second = s;
}

LocalNum MultiSeries::coeff(const Monomial& m) const {
    auto it = c_.find(m);
    return it == c_.end() ? LocalNum::zero(cfg_) : it->second;
}

LocalNum MultiSeries::constant_term() const { return coeff(Monomial(static_cast<size_t>(nvars_), 0)); }

int MultiSeries::degree() const {
    int d = -1;
    for (const auto& [m, c] : c_) d = std::max(d, total_degree(m));
    return d;
}

bool MultiSeries::is_zero_to_precision() const {
    for (const auto& [m, c] : c_)
        if (!c.is_zero_to_precision()) return false;
    return true;
}

long MultiSeries::min_coeff_ord_floor() const { return min_coeff_ord_floor_from_degree(0); }

long MultiSeries::min_coeff_ord_floor_from_degree(int d) const {
    long v = LocalNum::kInfOrd;
    for (const auto& [m, c] : c_)
        if (total_degree(m) >= d) v = std::min(v, c.ord_floor());
    return v;
}

void MultiSeries::check_compatible(const MultiSeries& o) const {
    if (!(cfg_ == o.cfg_) || nvars_ != o.nvars_ || cutoff_ != o.cutoff_)
        fail(errc::config_mismatch, "series with different config, arity or cutoff");
}

MultiSeries MultiSeries::operator-() const {
    MultiSeries r(cfg_, nvars_, cutoff_);
    r.exact_ = exact_;
    for (const auto& [m, c] : c_) r.c_.emplace(m, -c);
    return r;
}

MultiSeries operator+(const MultiSeries& a, const MultiSeries& b) {
    a.check_compatible(b);
    MultiSeries r = a;
    r.exact_ = a.exact_ && b.exact_;
    for (const auto& [m, c] : b.c_) r.add_term(m, c);
    return r;
}

MultiSeries operator-(const MultiSeries& a, const MultiSeries& b) { return a + (-b); }

MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
    a.check_compatible(b);
    MultiSeries r(a.cfg_, a.nvars_, a.cutoff_);
    r.exact_ = a.exact_ && b.exact_ && a.degree() + b.degree() <= a.cutoff_;
    Monomial m(static_cast<size_t>(a.nvars_), 0);
    for (const auto& [ma, ca] : a.c_) {
        int da = total_degree(ma);
        for (const auto& [mb, cb] : b.c_) {
            if (da + total_degree(mb) > a.cutoff_) continue;
            for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

MultiSeries MultiSeries::scaled(const LocalNum& c) const {
    MultiSeries r(cfg_, nvars_, cutoff_);
    r.exact_ = exact_;
    for (const auto& [m, v] : c_) r.add_term(m, v * c);
    return r;
}

MultiSeries MultiSeries::derivative(int i) const {
    MultiSeries r(cfg_, nvars_, cutoff_);
    r.exact_ = exact_;
    for (const auto& [m, c] : c_) {
        if (m[static_cast<size_t>(i)] == 0) continue;
        Monomial d = m;
        --d[static_cast<size_t>(i)];
        r.add_term(d, c * LocalNum::from_integer(cfg_, m[static_cast<size_t>(i)]));
    }
    return r;
}

SeriesMap MultiSeries::gradient() const {
    std::vector<MultiSeries> g;
    for (int i = 0; i < nvars_; ++i) g.push_back(derivative(i));
    return SeriesMap(std::move(g));
}

std::vector<std::vector<MultiSeries>> MultiSeries::hessian() const {
    std::vector<std::vector<MultiSeries>> h(static_cast<size_t>(nvars_));
    for (int i = 0; i < nvars_; ++i)
        for (int j = 0; j < nvars_; ++j) h[static_cast<size_t>(i)].push_back(derivative(i).derivative(j));
    return h;
}

MultiSeries MultiSeries::compose(const SeriesMap& m) const {
    if (m.size() != nvars_) fail(errc::invalid_argument, "composition arity mismatch");
    if (!m.has_zero_constant_terms()) fail(errc::nonzero_constant_term, "inner map must vanish at 0");
    const MultiSeries& model = m[0];
    MultiSeries one = MultiSeries::constant(model.config(), model.nvars(), model.degree_cutoff(),
                                            LocalNum::from_integer(model.config(), 1));
    // Powers of each component, built on demand.
    std::vector<std::vector<MultiSeries>> pw(static_cast<size_t>(nvars_), {one});
    auto power = [&](int i, int k) -> const MultiSeries& {
        auto& v = pw[static_cast<size_t>(i)];
        while (static_cast<int>(v.size()) <= k) v.push_back(v.back() * m[i]);
        return v[static_cast<size_t>(k)];
    };
    MultiSeries r(model.config(), model.nvars(), model.degree_cutoff());
    bool exact = exact_;
    int max_inner_deg = 0;
    for (int i = 0; i < nvars_; ++i) {
        if (!m[i].truncation_free()) exact = false;
        max_inner_deg = std::max(max_inner_deg, std::max(m[i].degree(), 0));
    }
    exact = exact && degree() * max_inner_deg <= model.degree_cutoff();
    for (const auto& [mono, c] : c_) {
        MultiSeries term = one.scaled(c);
        for (int i = 0; i < nvars_; ++i)
            if (mono[static_cast<size_t>(i)] > 0) term = term * power(i, mono[static_cast<size_t>(i)]);
        r = r + term;
    }
    r.exact_ = exact;
    return r;
}

MultiSeries MultiSeries::recenter(const std::vector<LocalNum>& c) const {
    if (static_cast<int>(c.size()) != nvars_) fail(errc::invalid_argument, "recenter arity mismatch");
    MultiSeries cur = *this;
    for (int i = 0; i < nvars_; ++i) {
        if (c[static_cast<size_t>(i)].is_zero()) continue;
        if (c[static_cast<size_t>(i)].ord_floor() < 0)
            fail(errc::non_integral_coefficient, "recenter point must be integral");
        // Binomial expansion in variable i: x^e -> sum C(e,k) c^(e-k) x^k.
        std::vector<LocalNum> cpow = {LocalNum::from_integer(cfg_, 1)};
        MultiSeries next(cfg_, nvars_, cutoff_);
        next.exact_ = cur.exact_;
        for (const auto& [mono, coef] : cur.c_) {
            int e = mono[static_cast<size_t>(i)];
            while (static_cast<int>(cpow.size()) <= e) cpow.push_back(cpow.back() * c[static_cast<size_t>(i)]);
            mpz_class binom = 1;
            for (int k = e; k >= 0; --k) {
                // binom = C(e, k); update as we go down from k = e.
                Monomial mm = mono;
                mm[static_cast<size_t>(i)] = k;
                LocalNum b = LocalNum::from_rational(cfg_, binom, mpz_class(1));
                next.add_term(mm, coef * b * cpow[static_cast<size_t>(e - k)]);
                if (k > 0) binom = binom * k / (e - k + 1);
            }
        }
        cur = std::move(next);
    }
    return cur;
}

MultiSeries MultiSeries::inverse() const {
    LocalNum c0 = constant_term();
    if (c0.is_zero_to_precision() || c0.ord_floor() > 0 || c0.ord() != 0)
        fail(errc::bad_constant_term, "series inverse needs a unit constant term");
    MultiSeries one = MultiSeries::constant(cfg_, nvars_, cutoff_, LocalNum::from_integer(cfg_, 1));
    MultiSeries two = MultiSeries::constant(cfg_, nvars_, cutoff_, LocalNum::from_integer(cfg_, 2));
    MultiSeries x = MultiSeries::constant(cfg_, nvars_, cutoff_, c0.inv());
    for (int correct = 1; correct <= cutoff_; correct *= 2) x = x * (two - *this * x);
    if (!(*this * x - one).is_zero_to_precision()) fail(errc::precision_exhausted, "series inverse check failed");
    x.exact_ = false;
    return x;
}

MultiSeries MultiSeries::sqrt_series() const {
    LocalNum c0 = constant_term();
    if (!(c0 == LocalNum::from_integer(cfg_, 1)))
        fail(errc::bad_constant_term, "series sqrt needs constant term 1");
    LocalNum half = LocalNum::from_integer(cfg_, 2).inv();
    MultiSeries r = MultiSeries::constant(cfg_, nvars_, cutoff_, LocalNum::from_integer(cfg_, 1));
    // Degree-by-degree: the degree-(d+1) slice of (s - r^2) / 2 extends r.
    for (int d = 1; d <= cutoff_; ++d) {
        MultiSeries res = *this - r * r;
        MultiSeries delta(cfg_, nvars_, cutoff_);
        for (const auto& [m, c] : res.coeffs())
            if (total_degree(m) == d) delta.add_term(m, c * half);
        r = r + delta;
    }
    if (!(r * r - *this).is_zero_to_precision()) fail(errc::precision_exhausted, "series sqrt check failed");
    r.exact_ = false;
    return r;
}

MultiSeries::Eval MultiSeries::eval(const std::vector<LocalNum>& point) const {
    if (static_cast<int>(point.size()) != nvars_) fail(errc::invalid_argument, "eval arity mismatch");
    long min_ord = LocalNum::kInfOrd;
    for (const auto& x : point) {
        if (x.ord_floor() < 1) fail(errc::convergence_domain, "evaluation point must lie in the open polydisc");
        min_ord = std::min(min_ord, x.ord_floor());
    }
    LocalNum v = eval_exact(point);
    long floor = exact_ ? LocalNum::kInfOrd
                        : static_cast<long>(cutoff_ + 1) * (min_ord >= LocalNum::kInfOrd ? 1 : min_ord);
    return {v, floor};
}

LocalNum MultiSeries::eval_exact(const std::vector<LocalNum>& point) const {
    std::vector<std::vector<LocalNum>> pw(point.size(), {LocalNum::from_integer(cfg_, 1)});
    auto power = [&](size_t i, int k) -> const LocalNum& {
        auto& v = pw[i];
        while (static_cast<int>(v.size()) <= k) v.push_back(v.back() * point[i]);
        return v[static_cast<size_t>(k)];
    };
    LocalNum acc = LocalNum::zero(cfg_);
    for (const auto& [m, c] : c_) {
        LocalNum t = c;
        for (size_t i = 0; i < point.size(); ++i)
            if (m[i] > 0) t = t * power(i, m[i]);
        acc = acc + t;
    }
    return acc;
}

std::string MultiSeries::to_string(const std::vector<std::string>& names) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : c_) {
        if (!first) os << " + ";
        os << "(" << c.to_string() << ")";
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            os << "*" << (i < names.size() ? names[i] : "x" + std::to_string(i + 1));
            if (m[i] > 1) os << "^" << m[i];
        }
        first = false;
    }
    return os.str();
}

SeriesMap::SeriesMap(std::vector<MultiSeries> comps) : comps_(std::move(comps)) {
    for (size_t i = 1; i < comps_.size(); ++i)
        if (comps_[i].nvars() != comps_[0].nvars() || comps_[i].degree_cutoff() != comps_[0].degree_cutoff() ||
            !(comps_[i].config() == comps_[0].config()))
            fail(errc::config_mismatch, "map components disagree on arity, cutoff or config");
}

SeriesMap SeriesMap::identity(FieldConfig cfg, int n, int cutoff) {
    std::vector<MultiSeries> comps;
    for (int i = 0; i < n; ++i) comps.push_back(MultiSeries::variable(cfg, n, cutoff, i));
    return SeriesMap(std::move(comps));
}

SeriesMap SeriesMap::linear(FieldConfig cfg, int cutoff, const std::vector<std::vector<LocalNum>>& A) {
    int n = static_cast<int>(A.size());
    std::vector<MultiSeries> comps;
    for (int i = 0; i < n; ++i) {
        MultiSeries s(cfg, static_cast<int>(A[static_cast<size_t>(i)].size()), cutoff);
        for (size_t j = 0; j < A[static_cast<size_t>(i)].size(); ++j) {
            Monomial m(A[static_cast<size_t>(i)].size(), 0);
            m[j] = 1;
            s.add_term(m, A[static_cast<size_t>(i)][j]);
        }
        comps.push_back(std::move(s));
    }
    return SeriesMap(std::move(comps));
}

bool SeriesMap::has_zero_constant_terms() const {
    for (const auto& s : comps_)
        if (!s.constant_term().is_zero_to_precision()) return false;
    return true;
}

SeriesMap SeriesMap::compose(const SeriesMap& inner) const {
    std::vector<MultiSeries> comps;
    for (const auto& s : comps_) comps.push_back(s.compose(inner));
    return SeriesMap(std::move(comps));
}

std::vector<std::vector<MultiSeries>> SeriesMap::jacobian() const {
    std::vector<std::vector<MultiSeries>> j(comps_.size());
    for (size_t i = 0; i < comps_.size(); ++i)
        for (int k = 0; k < nvars(); ++k) j[i].push_back(comps_[i].derivative(k));
    return j;
}

std::vector<LocalNum> SeriesMap::eval_exact(const std::vector<LocalNum>& point) const {
    std::vector<LocalNum> v;
    for (const auto& s : comps_) v.push_back(s.eval_exact(point));
    return v;
}

SeriesMap invert_map(const SeriesMap& g) {
    if (g.size() != g.nvars()) fail(errc::invalid_argument, "only square maps can be inverted");
    if (!g.has_zero_constant_terms()) fail(errc::nonzero_constant_term, "invert_map needs g(0) = 0");
    const FieldConfig& cfg = g[0].config();
    int n = g.nvars(), D = g[0].degree_cutoff();
    // Constant Jacobian part.
    std::vector<std::vector<LocalNum>> J(static_cast<size_t>(n));
    Monomial unit(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            Monomial m = unit;
            m[static_cast<size_t>(k)] = 1;
            J[static_cast<size_t>(i)].push_back(g[i].coeff(m));
        }
    LocalNum dj = det_local(J);
    if (dj.is_zero_to_precision() || dj.ord() != 0)
        fail(errc::singular_jacobian, "Jacobian at the origin is not a unit");
    auto Jinv = inv_local(J);

    // g = J x + G with G the nonlinear part; iterate h <- Jinv (y - G(h)).
    std::vector<MultiSeries> Gc;
    for (int i = 0; i < n; ++i) {
        MultiSeries lin(cfg, n, D);
        for (int k = 0; k < n; ++k) {
            Monomial m = unit;
            m[static_cast<size_t>(k)] = 1;
            lin.add_term(m, J[static_cast<size_t>(i)][static_cast<size_t>(k)]);
        }
        Gc.push_back(g[i] - lin);
    }
    SeriesMap G(std::move(Gc));
    SeriesMap id = SeriesMap::identity(cfg, n, D);
    auto apply_Jinv = [&](const SeriesMap& v) {
        std::vector<MultiSeries> out;
        for (int i = 0; i < n; ++i) {
            MultiSeries s(cfg, n, D);
            for (int k = 0; k < n; ++k)
                s = s + v[k].scaled(Jinv[static_cast<size_t>(i)][static_cast<size_t>(k)]);
            out.push_back(std::move(s));
        }
        return SeriesMap(std::move(out));
    };
    SeriesMap h = apply_Jinv(id);
    for (int it = 0; it < D; ++it) {
        std::vector<MultiSeries> rhs;
        for (int i = 0; i < n; ++i) rhs.push_back(id[i] - G[i].compose(h));
        h = apply_Jinv(SeriesMap(std::move(rhs)));
    }
    for (int i = 0; i < n; ++i) {
        if (h[i].min_coeff_ord_floor() < 0)
            fail(errc::non_integral_coefficient, "inverse map has non-integral coefficients");
        if (!(g[i].compose(h) - id[i]).is_zero_to_precision() || !(h[i].compose(g) - id[i]).is_zero_to_precision())
            fail(errc::precision_exhausted, "map inversion check failed");
    }
    std::vector<MultiSeries> out;
    for (int i = 0; i < n; ++i) {
        MultiSeries s = h[i];
        s.set_truncation_free(false);
        out.push_back(std::move(s));
    }
    return SeriesMap(std::move(out));
}

SeriesMap rescale_map(const SeriesMap& g, long beta) {
    if (beta < 0) fail(errc::invalid_argument, "beta must be >= 0");
    std::vector<MultiSeries> out;
    for (int i = 0; i < g.size(); ++i) {
        MultiSeries s(g[i].config(), g[i].nvars(), g[i].degree_cutoff());
        s.set_truncation_free(g[i].truncation_free());
        for (const auto& [m, c] : g[i].coeffs()) {
            long shift = beta * (total_degree(m) - 1);
            if (c.ord_floor() + shift < 0)
                fail(errc::non_integral_rescale, "rescaled map leaves the valuation ring");
            s.add_term(m, c.shift(shift));
        }
        out.push_back(std::move(s));
    }
    return SeriesMap(std::move(out));
}

LocalNum det_local(std::vector<std::vector<LocalNum>> a) {
    size_t n = a.size();
    if (n == 0) fail(errc::invalid_argument, "empty matrix");
    const FieldConfig& cfg = a[0][0].config();
    LocalNum det = LocalNum::from_integer(cfg, 1);
    for (size_t col = 0; col < n; ++col) {
        // Pivot on the entry of minimal valuation to keep divisions exact.
        size_t piv = col;
        long best = LocalNum::kInfOrd;
        for (size_t r = col; r < n; ++r) {
            const LocalNum& x = a[r][col];
            if (!x.is_zero_to_precision() && x.ord() < best) {
                best = x.ord();
                piv = r;
            }
        }
        if (best >= LocalNum::kInfOrd) {
            bool certain = true;
            for (size_t r = col; r < n; ++r)
                if (!a[r][col].is_zero()) certain = false;
            if (certain) return LocalNum::zero(cfg);
            long fl = LocalNum::kInfOrd;
            for (size_t r = col; r < n; ++r) fl = std::min(fl, a[r][col].known_floor());
            return LocalNum::pseudo_zero(cfg, fl);
        }
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det = det * a[col][col];
        LocalNum inv = a[col][col].inv();
        for (size_t r = col + 1; r < n; ++r) {
            if (a[r][col].is_zero()) continue;
            LocalNum f = a[r][col] * inv;
            for (size_t k = col; k < n; ++k) a[r][k] = a[r][k] - f * a[col][k];
        }
    }
    return det;
}

std::vector<std::vector<LocalNum>> inv_local(std::vector<std::vector<LocalNum>> a) {
    size_t n = a.size();
    const FieldConfig& cfg = a[0][0].config();
    std::vector<std::vector<LocalNum>> inv(n, std::vector<LocalNum>(n, LocalNum::zero(cfg)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = LocalNum::from_integer(cfg, 1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        long best = LocalNum::kInfOrd;
        for (size_t r = col; r < n; ++r) {
            const LocalNum& x = a[r][col];
            if (!x.is_zero_to_precision() && x.ord() < best) {
                best = x.ord();
                piv = r;
            }
        }
        if (best >= LocalNum::kInfOrd) fail(errc::singular_jacobian, "matrix is singular to working precision");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        LocalNum d = a[col][col].inv();
        for (size_t k = 0; k < n; ++k) {
            a[col][k] = a[col][k] * d;
            inv[col][k] = inv[col][k] * d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero_to_precision()) continue;
            LocalNum f = a[r][col];
            for (size_t k = 0; k < n; ++k) {
                a[r][k] = a[r][k] - f * a[col][k];
                inv[r][k] = inv[r][k] - f * inv[col][k];
            }
        }
    }
    return inv;
}

std::vector<LocalNum> matvec(const std::vector<std::vector<LocalNum>>& a, const std::vector<LocalNum>& x) {
    std::vector<LocalNum> y;
    for (const auto& row : a) {
        LocalNum s = LocalNum::zero(x[0].config());
        for (size_t j = 0; j < row.size(); ++j) s = s + row[j] * x[j];
        y.push_back(std::move(s));
    }
    return y;
}

MultiSeries det_series(const std::vector<std::vector<MultiSeries>>& a) {
    size_t n = a.size();
    if (n > 6) fail(errc::invalid_argument, "det_series limited to n <= 6");
    if (n == 1) return a[0][0];
    MultiSeries acc(a[0][0].config(), a[0][0].nvars(), a[0][0].degree_cutoff());
    for (size_t j = 0; j < n; ++j) {
        if (a[0][j].coeffs().empty()) continue;
        std::vector<std::vector<MultiSeries>> minor;
        for (size_t r = 1; r < n; ++r) {
            std::vector<MultiSeries> row;
            for (size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(a[r][c]);
            minor.push_back(std::move(row));
        }
        MultiSeries t = a[0][j] * det_series(minor);
        acc = j % 2 == 0 ? acc + t : acc - t;
    }
    return acc;
}

} // namespace nasp
