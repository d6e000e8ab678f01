#include "nasp/morse.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace nasp {

namespace {

bool is_unit(const LocalNum& x) { return !x.is_zero_to_precision() && x.ord() == 0; }

std::vector<LocalNum> eval_map_at(const std::vector<MultiSeries>& comps, const std::vector<LocalNum>& x) {
    std::vector<LocalNum> v;
    for (const auto& s : comps) v.push_back(s.eval_exact(x));
    return v;
}

std::vector<std::vector<LocalNum>> hessian_at(const MultiSeries& f, const std::vector<LocalNum>& x) {
    auto h = f.hessian();
    std::vector<std::vector<LocalNum>> m(h.size());
    for (size_t i = 0; i < h.size(); ++i)
        for (size_t j = 0; j < h.size(); ++j) m[i].push_back(h[i][j].eval_exact(x));
    return m;
}

} // namespace

std::vector<std::vector<LocalNum>> find_critical_points(const MultiSeries& f, const Region& omega) {
    const FieldConfig& cfg = f.config();
    if (!f.truncation_free()) fail(errc::invalid_argument, "critical-point search needs a polynomial phase");
    int n = f.nvars();
    if (omega.nvars() != n) fail(errc::invalid_argument, "region arity mismatch");
    std::vector<MultiSeries> grad = f.gradient().components();

    std::vector<std::vector<LocalNum>> points;
    for (const auto& coset : omega.cosets()) {
        long K = std::max(coset.depth, 1L);
        std::function<void(const Coset&)> scan = [&](const Coset& cand) {
            if (cand.depth < K) {
                std::vector<int64_t> col(static_cast<size_t>(n), 0);
                while (true) {
                    scan(cand.child(col));
                    size_t i = 0;
                    while (i < col.size() && ++col[i] == cfg.p) col[i++] = 0;
                    if (i == col.size()) break;
                }
                return;
            }
            auto rep = cand.representative(cfg);
            // grad f = 0 on a point of the class forces grad f(rep) = 0 mod w^K.
            for (const auto& g : grad) {
                LocalNum v = g.eval_exact(rep);
                if (v.ord_floor() >= K) continue;
                if (v.is_pseudo_zero()) fail(errc::precision_exhausted, "gradient residue undecidable");
                return;
            }
            LocalNum dh = det_local(hessian_at(f, rep));
            if (dh.is_zero_to_precision() || dh.ord() > 0)
                fail(errc::degenerate_critical_class,
                     "residue class with vanishing gradient but degenerate Hessian mod w");
            // Newton lift: x <- x - Hess^-1 grad, quadratically convergent.
            std::vector<LocalNum> x = rep;
            for (int it = 0; it < 2 * cfg.precision; ++it) {
                auto gv = eval_map_at(grad, x);
                bool done = true;
                for (const auto& g : gv)
                    if (!g.is_zero_to_precision()) done = false;
                if (done) break;
                auto step = matvec(inv_local(hessian_at(f, x)), gv);
                for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] - step[static_cast<size_t>(i)];
            }
            for (const auto& g : eval_map_at(grad, x))
                if (!g.is_zero_to_precision()) fail(errc::precision_exhausted, "Newton lift did not converge");
            if (!omega.contains_point(x)) return;
            points.push_back(std::move(x));
        };
        scan(coset);
    }
    return points;
}

namespace {

// Decide variable swaps/shears making every LDL pivot of C a unit, mirroring
// the stage pivots the series loop will meet. Returns the substitution U
// (integer entries); requires det C to be a unit.
std::vector<std::vector<long>> pivot_plan(std::vector<std::vector<LocalNum>> W) {
    size_t n = W.size();
    std::vector<std::vector<long>> U(n, std::vector<long>(n, 0));
    for (size_t i = 0; i < n; ++i) U[i][i] = 1;
    auto apply_swap = [&](size_t a, size_t b) {
        for (size_t r = 0; r < n; ++r) std::swap(W[r][a], W[r][b]);
        std::swap(W[a], W[b]);
        for (size_t r = 0; r < n; ++r) std::swap(U[r][a], U[r][b]);
    };
    auto apply_shear = [&](size_t j, size_t k) {
        // x_j <- x_j + x_k: column/row updates of the quadratic form.
        for (size_t r = 0; r < n; ++r) W[r][k] = W[r][k] + W[r][j];
        for (size_t c = 0; c < n; ++c) W[k][c] = W[k][c] + W[j][c];
        for (size_t r = 0; r < n; ++r) U[r][k] += U[r][j];
    };
    for (size_t i = 0; i < n; ++i) {
        if (!is_unit(W[i][i])) {
            bool fixed = false;
            for (size_t j = i; j < n && !fixed; ++j)
                if (is_unit(W[j][j])) {
                    if (j != i) apply_swap(i, j);
                    fixed = true;
                }
            for (size_t j = i; j < n && !fixed; ++j)
                for (size_t k = j + 1; k < n && !fixed; ++k)
                    if (is_unit(W[j][k])) {
                        apply_shear(j, k); // makes W[k][k] a unit (p != 2)
                        if (k != i) apply_swap(i, k);
                        fixed = true;
                    }
            if (!fixed) fail(errc::degenerate_hessian, "no unit pivot available");
        }
        LocalNum inv = W[i][i].inv();
        for (size_t r = i + 1; r < n; ++r)
            for (size_t c = i + 1; c < n; ++c) W[r][c] = W[r][c] - W[i][r] * W[i][c] * inv;
    }
    return U;
}

std::vector<std::vector<long>> integer_inverse(const std::vector<std::vector<long>>& U) {
    size_t n = U.size();
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n)), inv(n, std::vector<mpq_class>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        inv[i][i] = 1;
        for (size_t j = 0; j < n; ++j) a[i][j] = U[i][j];
    }
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) fail(errc::singular_jacobian, "substitution matrix is singular");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        mpq_class d = a[col][col];
        for (size_t k = 0; k < n; ++k) {
            a[col][k] /= d;
            inv[col][k] /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            mpq_class f = a[r][col];
            for (size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[col][k];
                inv[r][k] -= f * inv[col][k];
            }
        }
    }
    std::vector<std::vector<long>> out(n, std::vector<long>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (inv[i][j].get_den() != 1) fail(errc::singular_jacobian, "substitution inverse is not integral");
            out[i][j] = static_cast<long>(inv[i][j].get_num().get_si());
        }
    return out;
}

SeriesMap linear_from_integers(const FieldConfig& cfg, int cutoff, const std::vector<std::vector<long>>& A) {
    std::vector<std::vector<LocalNum>> M(A.size());
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[i].size(); ++j) M[i].push_back(LocalNum::from_integer(cfg, A[i][j]));
    return SeriesMap::linear(cfg, cutoff, M);
}

// Quadratic-shape coefficients: g = sum_{j<=k} x_j x_k htilde_jk with series
// entries, symmetrized to h_jk = h_kj.
std::vector<std::vector<MultiSeries>> quadratic_shape(const MultiSeries& g) {
    const FieldConfig& cfg = g.config();
    int n = g.nvars(), D = g.degree_cutoff();
    std::vector<std::vector<MultiSeries>> h(static_cast<size_t>(n),
                                            std::vector<MultiSeries>(static_cast<size_t>(n), MultiSeries(cfg, n, D)));
    for (const auto& [m, c] : g.coeffs()) {
        if (total_degree(m) < 2) {
            if (!c.is_zero_to_precision()) fail(errc::not_critical, "recentred phase has sub-quadratic terms");
            continue;
        }
        int j = 0;
        while (m[static_cast<size_t>(j)] == 0) ++j;
        Monomial rest = m;
        --rest[static_cast<size_t>(j)];
        int k = 0;
        while (rest[static_cast<size_t>(k)] == 0) ++k;
        --rest[static_cast<size_t>(k)];
        h[static_cast<size_t>(j)][static_cast<size_t>(k)].add_term(rest, c);
    }
    LocalNum half = LocalNum::from_integer(cfg, 2).inv();
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            MultiSeries s = h[static_cast<size_t>(j)][static_cast<size_t>(k)].scaled(half);
            h[static_cast<size_t>(j)][static_cast<size_t>(k)] = s;
            h[static_cast<size_t>(k)][static_cast<size_t>(j)] = s;
        }
    return h;
}

} // namespace

MorseData morse_normal_form(const MultiSeries& f, const std::vector<LocalNum>& x0, long alpha) {
    const FieldConfig& cfg = f.config();
    int n = f.nvars(), D = f.degree_cutoff();
    if (alpha < 1) fail(errc::invalid_argument, "alpha must be >= 1");
    SeriesMap grad = f.gradient();
    for (const auto& g : grad.components())
        if (!g.eval_exact(x0).is_zero_to_precision()) fail(errc::not_critical, "x0 is not a critical point");
    LocalNum dh = det_local(hessian_at(f, x0));
    if (dh.is_zero_to_precision() || dh.ord() != 0)
        fail(errc::degenerate_hessian, "Hessian at x0 is not a unit matrix mod w");

    MultiSeries centred = f.recenter(x0);
    MultiSeries ftilde = centred - MultiSeries::constant(cfg, n, D, centred.constant_term());

    // Substitution making every stage pivot a unit, decided on Hess(0)/2.
    LocalNum half = LocalNum::from_integer(cfg, 2).inv();
    std::vector<std::vector<LocalNum>> C = hessian_at(ftilde, std::vector<LocalNum>(static_cast<size_t>(n), LocalNum::zero(cfg)));
    for (auto& row : C)
        for (auto& e : row) e = e * half;
    auto U = pivot_plan(C);
    SeriesMap Umap = linear_from_integers(cfg, D, U);
    MultiSeries g = ftilde.compose(Umap);

    auto h = quadratic_shape(g);
    std::vector<LocalNum> units;
    std::vector<MultiSeries> S;
    for (int i = 0; i < n; ++i) {
        LocalNum a = h[static_cast<size_t>(i)][static_cast<size_t>(i)].constant_term();
        if (a.is_zero_to_precision() || a.ord() != 0)
            fail(errc::degenerate_hessian, "stage pivot is not a unit");
        MultiSeries hinv = h[static_cast<size_t>(i)][static_cast<size_t>(i)].inverse();
        MultiSeries lin = MultiSeries::variable(cfg, n, D, i);
        for (int j = i + 1; j < n; ++j)
            lin = lin + MultiSeries::variable(cfg, n, D, j) * (h[static_cast<size_t>(i)][static_cast<size_t>(j)] * hinv);
        MultiSeries unitfac = h[static_cast<size_t>(i)][static_cast<size_t>(i)].scaled(a.inv()).sqrt_series();
        S.push_back(unitfac * lin);
        units.push_back(a);
        for (int j = i + 1; j < n; ++j)
            for (int k = i + 1; k < n; ++k)
                h[static_cast<size_t>(j)][static_cast<size_t>(k)] =
                    h[static_cast<size_t>(j)][static_cast<size_t>(k)] -
                    h[static_cast<size_t>(i)][static_cast<size_t>(j)] * h[static_cast<size_t>(i)][static_cast<size_t>(k)] * hinv;
    }
    SeriesMap T = SeriesMap(std::move(S)).compose(linear_from_integers(cfg, D, integer_inverse(U)));

    // Certificates: residual, T(0) = 0, unit Jacobian, gradient combination.
    MultiSeries residual = ftilde;
    for (int i = 0; i < n; ++i) residual = residual - (T[i] * T[i]).scaled(units[static_cast<size_t>(i)]);
    if (!residual.is_zero_to_precision()) fail(errc::precision_exhausted, "normal-form residual does not vanish");
    long floor = residual.min_coeff_ord_floor();
    if (!T.has_zero_constant_terms()) fail(errc::precision_exhausted, "T(0) != 0");
    Monomial unit_m(static_cast<size_t>(n), 0);
    std::vector<std::vector<LocalNum>> J(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            Monomial m = unit_m;
            m[static_cast<size_t>(k)] = 1;
            J[static_cast<size_t>(i)].push_back(T[i].coeff(m));
        }
    LocalNum dj = det_local(J);
    if (dj.is_zero_to_precision() || dj.ord() != 0) fail(errc::degenerate_hessian, "Jac T(0) is not a unit");
    // grad ftilde = sum_i 2 a_i T_i grad T_i: any interior zero of grad maps to T = 0.
    for (int j = 0; j < n; ++j) {
        MultiSeries expect(cfg, n, D);
        for (int i = 0; i < n; ++i)
            expect = expect + (T[i] * T[i].derivative(j)).scaled(units[static_cast<size_t>(i)] + units[static_cast<size_t>(i)]);
        if (!(ftilde.derivative(j) - expect).is_zero_to_precision())
            fail(errc::precision_exhausted, "gradient combination check failed");
    }

    return MorseData{x0, std::move(units), std::move(T), alpha, floor};
}

MorseCheck verify_morse(const MorseData& md, const MultiSeries& f, int samples, unsigned seed) {
    const FieldConfig& cfg = f.config();
    int n = f.nvars();
    std::mt19937 rng(seed);
    std::uniform_int_distribution<long> dd(0, cfg.p - 1);
    LocalNum f0 = f.eval_exact(md.center);
    MorseCheck rep;
    rep.worst_observed_floor = LocalNum::kInfOrd;
    for (int t = 0; t < samples; ++t) {
        std::vector<LocalNum> y;
        for (int i = 0; i < n; ++i) {
            std::vector<int64_t> digits(static_cast<size_t>(cfg.precision));
            for (auto& d : digits) d = dd(rng);
            y.push_back(LocalNum::from_digits(cfg, md.alpha, std::move(digits)));
        }
        std::vector<LocalNum> xy(md.center);
        for (int i = 0; i < n; ++i) xy[static_cast<size_t>(i)] = xy[static_cast<size_t>(i)] + y[static_cast<size_t>(i)];
        LocalNum lhs = f.eval_exact(xy) - f0;
        LocalNum rhs = LocalNum::zero(cfg);
        long floor = LocalNum::kInfOrd;
        for (int i = 0; i < n; ++i) {
            auto ev = md.T[i].eval(y);
            rhs = rhs + md.units[static_cast<size_t>(i)] * ev.value * ev.value;
            if (ev.error_floor < LocalNum::kInfOrd)
                floor = std::min(floor, ev.error_floor + std::min(ev.value.ord_floor(), ev.error_floor));
        }
        LocalNum diff = lhs - rhs;
        bool ok = diff.is_zero_to_precision() || diff.ord_floor() >= floor;
        if (!ok) return MorseCheck{false, rep.samples, floor};
        ++rep.samples;
        rep.worst_observed_floor = std::min(rep.worst_observed_floor, floor);
    }
    rep.ok = true;
    return rep;
}

bool unit_jacobian_certificate(const SeriesMap& m) {
    MultiSeries d = det_series(m.jacobian());
    LocalNum c0 = d.constant_term();
    return !c0.is_zero_to_precision() && c0.ord() == 0 && d.min_coeff_ord_floor() >= 0;
}

} // namespace nasp
