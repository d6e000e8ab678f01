#include <doctest.h>

#include <functional>
#include <random>

#include "nasp/series.hpp"

using namespace nasp;

namespace {

MultiSeries poly(const FieldConfig& cfg, int n, int D, std::initializer_list<std::pair<Monomial, long>> terms) {
    MultiSeries s(cfg, n, D);
    for (const auto& [m, c] : terms) s.add_term(m, LocalNum::from_integer(cfg, c));
    return s;
}

MultiSeries random_series(std::mt19937& rng, const FieldConfig& cfg, int n, int D, int max_deg, bool zero_const) {
    std::uniform_int_distribution<long> cd(-4, 4);
    MultiSeries s(cfg, n, D);
    std::vector<Monomial> monos;
    Monomial m(static_cast<size_t>(n), 0);
    // All monomials of total degree <= max_deg.
    std::function<void(int, int)> gen = [&](int i, int left) {
        if (i == n) {
            monos.push_back(m);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            m[static_cast<size_t>(i)] = e;
            gen(i + 1, left - e);
        }
        m[static_cast<size_t>(i)] = 0;
    };
    gen(0, max_deg);
    for (const auto& mono : monos) {
        if (zero_const && total_degree(mono) == 0) continue;
        long c = cd(rng);
        if (c != 0) s.add_term(mono, LocalNum::from_integer(cfg, c));
    }
    return s;
}

SeriesMap random_zero_map(std::mt19937& rng, const FieldConfig& cfg, int n, int D, int max_deg) {
    std::vector<MultiSeries> comps;
    for (int i = 0; i < n; ++i) comps.push_back(random_series(rng, cfg, n, D, max_deg, true));
    return SeriesMap(std::move(comps));
}

} // namespace

TEST_CASE("ring operations truncate at the cutoff") {
    auto cfg = FieldConfig::padic(5, 8);
    auto one_plus_x = poly(cfg, 1, 4, {{{0}, 1}, {{1}, 1}});
    auto one_minus_x = poly(cfg, 1, 4, {{{0}, 1}, {{1}, -1}});
    auto prod = one_plus_x * one_minus_x;
    CHECK(prod.coeff({0}) == LocalNum::from_integer(cfg, 1));
    CHECK(prod.coeff({1}).is_zero_to_precision());
    CHECK(prod.coeff({2}) == LocalNum::from_integer(cfg, -1));

    auto xy = poly(cfg, 2, 4, {{{1, 1}, 1}});
    CHECK((xy + xy).coeff({1, 1}) == LocalNum::from_integer(cfg, 2));

    auto deep = poly(cfg, 1, 4, {{{3}, 1}});
    CHECK((deep * deep).coeffs().empty()); // degree 6 > cutoff 4
    CHECK_FALSE((deep * deep).truncation_free());
}

TEST_CASE("multiplication associativity on random triples") {
    std::mt19937 rng(5);
    auto cfg = FieldConfig::padic(3, 8);
    for (int t = 0; t < 25; ++t) {
        auto a = random_series(rng, cfg, 2, 6, 3, false);
        auto b = random_series(rng, cfg, 2, 6, 3, false);
        auto c = random_series(rng, cfg, 2, 6, 3, false);
        CHECK(((a * b) * c - a * (b * c)).is_zero_to_precision());
    }
}

TEST_CASE("derivatives, gradient, hessian") {
    auto cfg = FieldConfig::padic(5, 8);
    auto f = poly(cfg, 2, 6, {{{2, 0}, 1}, {{1, 1}, 1}}); // x^2 + x y
    auto g = f.gradient();
    CHECK(g[0].coeff({1, 0}) == LocalNum::from_integer(cfg, 2));
    CHECK(g[0].coeff({0, 1}) == LocalNum::from_integer(cfg, 1));
    CHECK(g[1].coeff({1, 0}) == LocalNum::from_integer(cfg, 1));
    CHECK(g[1].coeffs().size() == 1);
    auto h = f.hessian();
    CHECK(h[0][0].constant_term() == LocalNum::from_integer(cfg, 2));
    CHECK(h[0][1].constant_term() == LocalNum::from_integer(cfg, 1));
    CHECK(h[1][1].constant_term().is_zero());
}

TEST_CASE("gradient matches finite differences") {
    std::mt19937 rng(11);
    auto cfg = FieldConfig::padic(5, 16);
    auto f = random_series(rng, cfg, 2, 8, 4, false);
    auto g = f.gradient();
    std::uniform_int_distribution<long> ud(1, 4);
    for (int t = 0; t < 20; ++t) {
        std::vector<LocalNum> x = {LocalNum::unit_rep(cfg, ud(rng), 1), LocalNum::unit_rep(cfg, ud(rng), 1)};
        LocalNum hstep = LocalNum::uniformizer_pow(cfg, 4);
        for (int i = 0; i < 2; ++i) {
            auto xh = x;
            xh[static_cast<size_t>(i)] = xh[static_cast<size_t>(i)] + hstep;
            // (f(x+h e_i) - f(x))/h agrees with grad_i f(x) to ord >= ord h.
            LocalNum fd = (f.eval_exact(xh) - f.eval_exact(x)) * hstep.inv();
            LocalNum diff = fd - g[i].eval_exact(x);
            CHECK(diff.ord_floor() >= 4);
        }
    }
}

TEST_CASE("derivation property on random pairs") {
    std::mt19937 rng(13);
    auto cfg = FieldConfig::padic(3, 8);
    for (int t = 0; t < 20; ++t) {
        auto f = random_series(rng, cfg, 2, 6, 3, false);
        auto g = random_series(rng, cfg, 2, 6, 3, false);
        for (int i = 0; i < 2; ++i)
            CHECK(((f * g).derivative(i) - (f.derivative(i) * g + f * g.derivative(i))).is_zero_to_precision());
    }
}

TEST_CASE("composition basics") {
    auto cfg = FieldConfig::padic(5, 8);
    auto s = poly(cfg, 2, 6, {{{2, 0}, 1}}); // x^2 in two variables
    auto m = SeriesMap({poly(cfg, 2, 6, {{{1, 0}, 1}, {{0, 1}, 1}}), poly(cfg, 2, 6, {{{0, 1}, 1}})});
    auto c = s.compose(m); // (x+y)^2
    CHECK(c.coeff({2, 0}) == LocalNum::from_integer(cfg, 1));
    CHECK(c.coeff({1, 1}) == LocalNum::from_integer(cfg, 2));
    CHECK(c.coeff({0, 2}) == LocalNum::from_integer(cfg, 1));

    std::mt19937 rng(17);
    auto f = random_series(rng, cfg, 2, 6, 3, false);
    auto id = SeriesMap::identity(cfg, 2, 6);
    CHECK((f.compose(id) - f).is_zero_to_precision());

    auto bad = SeriesMap({poly(cfg, 2, 6, {{{0, 0}, 1}}), poly(cfg, 2, 6, {{{0, 1}, 1}})});
    CHECK_THROWS_AS(f.compose(bad), Error);
}

TEST_CASE("double composition associativity") {
    std::mt19937 rng(19);
    auto cfg = FieldConfig::padic(3, 8);
    for (int t = 0; t < 10; ++t) {
        auto s = random_series(rng, cfg, 2, 6, 2, false);
        auto m = random_zero_map(rng, cfg, 2, 6, 2);
        auto mp = random_zero_map(rng, cfg, 2, 6, 2);
        auto lhs = s.compose(m).compose(mp);
        auto rhs = s.compose(m.compose(mp));
        CHECK((lhs - rhs).is_zero_to_precision());
    }
}

TEST_CASE("chain rule at series level") {
    std::mt19937 rng(23);
    auto cfg = FieldConfig::padic(5, 8);
    for (int t = 0; t < 8; ++t) {
        auto g = random_zero_map(rng, cfg, 2, 6, 2);
        auto h = random_zero_map(rng, cfg, 2, 6, 2);
        auto gh = g.compose(h);
        auto Jgh = gh.jacobian();
        auto Jg = g.jacobian();
        auto Jh = h.jacobian();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                MultiSeries expect(cfg, 2, 6);
                for (int k = 0; k < 2; ++k)
                    expect = expect + Jg[static_cast<size_t>(i)][static_cast<size_t>(k)].compose(h) *
                                          Jh[static_cast<size_t>(k)][static_cast<size_t>(j)];
                CHECK((Jgh[static_cast<size_t>(i)][static_cast<size_t>(j)] - expect).is_zero_to_precision());
            }
    }
}

TEST_CASE("map inversion: identity and Catalan coefficients") {
    auto cfg = FieldConfig::padic(7, 12);
    auto id = SeriesMap::identity(cfg, 2, 6);
    auto idinv = invert_map(id);
    for (int i = 0; i < 2; ++i) CHECK((idinv[i] - id[i]).is_zero_to_precision());

    // g(x) = x + x^2 at cutoff 5: inverse is x - x^2 + 2x^3 - 5x^4 + 14x^5.
    auto g = SeriesMap({poly(cfg, 1, 5, {{{1}, 1}, {{2}, 1}})});
    auto h = invert_map(g);
    CHECK(h[0].coeff({1}) == LocalNum::from_integer(cfg, 1));
    CHECK(h[0].coeff({2}) == LocalNum::from_integer(cfg, -1));
    CHECK(h[0].coeff({3}) == LocalNum::from_integer(cfg, 2));
    CHECK(h[0].coeff({4}) == LocalNum::from_integer(cfg, -5));
    CHECK(h[0].coeff({5}) == LocalNum::from_integer(cfg, 14));

    // Singular Jacobian: g = (p x + y^2, ...) has det Jac(0) = 0 mod p.
    auto sing = SeriesMap({poly(cfg, 1, 5, {{{1}, 7}, {{2}, 1}})});
    CHECK_THROWS_AS(invert_map(sing), Error);
}

TEST_CASE("random map inversion round trips") {
    std::mt19937 rng(29);
    auto cfg = FieldConfig::padic(5, 10);
    int done = 0;
    while (done < 6) {
        auto g = random_zero_map(rng, cfg, 2, 6, 3);
        Monomial e1 = {1, 0}, e2 = {0, 1};
        auto J = std::vector<std::vector<LocalNum>>{{g[0].coeff(e1), g[0].coeff(e2)},
                                                    {g[1].coeff(e1), g[1].coeff(e2)}};
        auto d = det_local(J);
        if (d.is_zero_to_precision() || d.ord() != 0) continue;
        auto h = invert_map(g);
        auto gh = g.compose(h);
        auto id = SeriesMap::identity(cfg, 2, 6);
        for (int i = 0; i < 2; ++i) CHECK((gh[i] - id[i]).is_zero_to_precision());
        ++done;
    }
}

TEST_CASE("rescale_map") {
    auto cfg = FieldConfig::padic(5, 8);
    auto id = SeriesMap::identity(cfg, 2, 6);
    auto r = rescale_map(id, 3);
    for (int i = 0; i < 2; ++i) CHECK((r[i] - id[i]).is_zero_to_precision());

    auto q = SeriesMap({poly(cfg, 1, 6, {{{2}, 1}})});
    auto rq = rescale_map(q, 1);
    CHECK(rq[0].coeff({2}) == LocalNum::uniformizer_pow(cfg, 1));

    // A constant term of valuation 0 cannot absorb the w^-beta factor.
    auto bad = SeriesMap({poly(cfg, 1, 6, {{{0}, 1}, {{1}, 1}})});
    CHECK_THROWS_AS(rescale_map(bad, 1), Error);
}

TEST_CASE("local inverse theorem route: rescale then invert") {
    // g(0) = 0 mod w^(beta+1), unit Jacobian: the rescaled map inverts cleanly.
    auto cfg = FieldConfig::padic(5, 12);
    long beta = 2;
    auto g = SeriesMap({poly(cfg, 1, 6, {{{0}, 125}, {{1}, 2}, {{2}, 1}})}); // 125 = w^(beta+1)
    auto gt = rescale_map(g, beta);
    MultiSeries centered = gt[0] - MultiSeries::constant(cfg, 1, 6, gt[0].constant_term());
    auto h = invert_map(SeriesMap({centered}));
    auto check = SeriesMap({centered}).compose(h);
    CHECK((check[0] - MultiSeries::variable(cfg, 1, 6, 0)).is_zero_to_precision());
}

TEST_CASE("series square roots") {
    auto cfg3 = FieldConfig::padic(3, 12);
    auto one = poly(cfg3, 1, 8, {{{0}, 1}});
    CHECK((one.sqrt_series() - one).is_zero_to_precision());

    auto s = poly(cfg3, 1, 8, {{{0}, 1}, {{1}, 1}});
    auto r = s.sqrt_series();
    CHECK((r * r - s).is_zero_to_precision());

    auto s2 = poly(cfg3, 1, 8, {{{0}, 1}, {{1}, 3}, {{2}, 1}}); // 1 + p x + x^2 over Q_3
    auto r2 = s2.sqrt_series();
    CHECK((r2 * r2 - s2).is_zero_to_precision());

    CHECK_THROWS_AS(poly(cfg3, 1, 8, {{{0}, 2}}).sqrt_series(), Error);
}

TEST_CASE("series inverse") {
    auto cfg = FieldConfig::padic(5, 10);
    auto u = poly(cfg, 2, 6, {{{0, 0}, 2}, {{1, 0}, 3}, {{0, 2}, 1}});
    auto v = u.inverse();
    auto one = poly(cfg, 2, 6, {{{0, 0}, 1}});
    CHECK((u * v - one).is_zero_to_precision());
    CHECK_THROWS_AS(poly(cfg, 2, 6, {{{1, 0}, 1}}).inverse(), Error);
}

TEST_CASE("evaluation on the open polydisc") {
    auto cfg = FieldConfig::padic(5, 12);
    auto x2 = poly(cfg, 1, 10, {{{2}, 1}});
    auto p = LocalNum::uniformizer_pow(cfg, 1);
    CHECK(x2.eval({p}).value == LocalNum::uniformizer_pow(cfg, 2));
    CHECK(x2.eval({LocalNum::zero(cfg)}).value.is_zero());

    // Geometric series: sum_k x^k at x = p agrees with 1/(1-p) below the cutoff.
    MultiSeries geo(cfg, 1, 10);
    for (int k = 0; k <= 10; ++k) geo.add_term({k}, LocalNum::from_integer(cfg, 1));
    geo.set_truncation_free(false);
    auto ev = geo.eval({p});
    CHECK(ev.error_floor == 11);
    LocalNum closed = LocalNum::from_rational(cfg, mpz_class(1), mpz_class(1 - 5));
    CHECK((ev.value - closed).ord_floor() >= ev.error_floor);

    CHECK_THROWS_AS(x2.eval({LocalNum::from_integer(cfg, 1)}), Error);
}

TEST_CASE("recenter is an exact Taylor shift") {
    std::mt19937 rng(31);
    auto cfg = FieldConfig::padic(7, 14);
    auto f = random_series(rng, cfg, 2, 8, 4, false);
    std::vector<LocalNum> c = {LocalNum::from_integer(cfg, 2), LocalNum::from_integer(cfg, -1)};
    auto shifted = f.recenter(c);
    CHECK(shifted.truncation_free());
    for (int t = 0; t < 10; ++t) {
        std::uniform_int_distribution<long> ud(0, 6);
        std::vector<LocalNum> x = {LocalNum::from_integer(cfg, ud(rng)), LocalNum::from_integer(cfg, ud(rng))};
        std::vector<LocalNum> xc = {x[0] + c[0], x[1] + c[1]};
        CHECK(shifted.eval_exact(x) == f.eval_exact(xc));
    }
}

TEST_CASE("det of local matrices") {
    auto cfg = FieldConfig::padic(5, 10);
    auto I = [&](long v) { return LocalNum::from_integer(cfg, v); };
    auto d = det_local({{I(2), I(1)}, {I(1), I(2)}});
    CHECK(d == I(3));
    auto dz = det_local({{I(1), I(1)}, {I(1), I(1)}});
    CHECK(dz.is_zero_to_precision());
    auto inv = inv_local({{I(2), I(1)}, {I(1), I(2)}});
    auto prod = matvec(inv, {I(3), I(0)});
    CHECK(prod[0] == I(2));
    CHECK(prod[1] == I(-1));
}
