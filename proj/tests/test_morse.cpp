#include <doctest.h>

#include "nasp/morse.hpp"

using namespace nasp;

namespace {

MultiSeries poly(const FieldConfig& cfg, int n, int D, std::initializer_list<std::pair<Monomial, long>> terms) {
    MultiSeries s(cfg, n, D);
    for (const auto& [m, c] : terms) s.add_term(m, LocalNum::from_integer(cfg, c));
    return s;
}

} // namespace

TEST_CASE("critical points: x^2 on the maximal ideal") {
    auto cfg = FieldConfig::padic(5, 16);
    auto f = poly(cfg, 1, 12, {{{2}, 1}});
    Region ball(cfg, 1, {Coset::polydisc(1, 1)});
    auto pts = find_critical_points(f, ball);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0][0].is_zero_to_precision());
}

TEST_CASE("critical points: x^3 - 3x has the two unit roots") {
    for (auto kind : {Kind::padic, Kind::laurent}) {
        auto cfg = kind == Kind::padic ? FieldConfig::padic(5, 16) : FieldConfig::laurent(5, 16);
        auto f = poly(cfg, 1, 12, {{{3}, 1}, {{1}, -3}});
        auto pts = find_critical_points(f, Region::full(cfg, 1));
        REQUIRE(pts.size() == 2);
        auto grad = f.gradient();
        for (const auto& x : pts) {
            CHECK(grad[0].eval_exact(x).is_zero_to_precision());
            bool is_one = x[0] == LocalNum::from_integer(cfg, 1);
            bool is_minus_one = x[0] == LocalNum::from_integer(cfg, -1);
            CHECK((is_one || is_minus_one));
        }
    }
}

TEST_CASE("critical points: root location respects the region") {
    auto cfg = FieldConfig::padic(5, 16);
    auto f = poly(cfg, 1, 12, {{{2}, 1}, {{3}, 1}}); // critical at 0 and -2/3
    auto all = find_critical_points(f, Region::full(cfg, 1));
    CHECK(all.size() == 2);
    bool found_frac = false;
    for (const auto& x : all)
        if (x[0] == LocalNum::from_rational(cfg, mpz_class(-2), mpz_class(3))) found_frac = true;
    CHECK(found_frac);
    // Restricting to pO excludes the unit root.
    Region ball(cfg, 1, {Coset::polydisc(1, 1)});
    auto inside = find_critical_points(f, ball);
    REQUIRE(inside.size() == 1);
    CHECK(inside[0][0].is_zero_to_precision());
}

TEST_CASE("degenerate classes are reported") {
    auto cfg = FieldConfig::padic(3, 16);
    auto f = poly(cfg, 2, 12, {{{2, 0}, 1}, {{1, 1}, 1}, {{0, 2}, 1}}); // det Hess = 3
    CHECK_THROWS_AS(find_critical_points(f, Region::full(cfg, 2)), Error);
}

TEST_CASE("normal form: pure square") {
    auto cfg = FieldConfig::padic(5, 16);
    auto f = poly(cfg, 1, 12, {{{2}, 1}});
    auto md = morse_normal_form(f, {LocalNum::zero(cfg)}, 1);
    REQUIRE(md.units.size() == 1);
    CHECK(md.units[0] == LocalNum::from_integer(cfg, 1));
    CHECK((md.T[0] - MultiSeries::variable(cfg, 1, 12, 0)).is_zero_to_precision());
    CHECK(md.residual_floor >= cfg.precision);
    CHECK(verify_morse(md, f, 50).ok);
}

TEST_CASE("normal form: x^2 + x^3 absorbs the cubic term") {
    for (auto kind : {Kind::padic, Kind::laurent}) {
        auto cfg = kind == Kind::padic ? FieldConfig::padic(7, 16) : FieldConfig::laurent(7, 16);
        auto f = poly(cfg, 1, 12, {{{2}, 1}, {{3}, 1}});
        auto md = morse_normal_form(f, {LocalNum::zero(cfg)}, 1);
        CHECK(md.units[0] == LocalNum::from_integer(cfg, 1));
        // T_1 = x sqrt(1 + x).
        auto expect = MultiSeries::variable(cfg, 1, 12, 0) *
                      poly(cfg, 1, 12, {{{0}, 1}, {{1}, 1}}).sqrt_series();
        CHECK((md.T[0] - expect).is_zero_to_precision());
        CHECK(verify_morse(md, f, 100).ok);
        CHECK(unit_jacobian_certificate(md.T));
    }
}

TEST_CASE("normal form: binary quadratic over Q_5") {
    auto cfg = FieldConfig::padic(5, 24);
    auto f = poly(cfg, 2, 12, {{{2, 0}, 1}, {{1, 1}, 1}, {{0, 2}, 1}});
    std::vector<LocalNum> x0 = {LocalNum::zero(cfg), LocalNum::zero(cfg)};
    auto md = morse_normal_form(f, x0, 1);
    REQUIRE(md.units.size() == 2);
    CHECK(md.units[0] == LocalNum::from_integer(cfg, 1));
    CHECK(md.units[1] == LocalNum::from_rational(cfg, mpz_class(3), mpz_class(4)));
    auto check = verify_morse(md, f, 100);
    CHECK(check.ok);
    CHECK(check.samples == 100);
    CHECK(unit_jacobian_certificate(md.T));
}

TEST_CASE("normal form: pivot shear for an antidiagonal Hessian") {
    auto cfg = FieldConfig::padic(5, 20);
    auto f = poly(cfg, 2, 12, {{{1, 1}, 1}}); // f = x y
    std::vector<LocalNum> x0 = {LocalNum::zero(cfg), LocalNum::zero(cfg)};
    auto md = morse_normal_form(f, x0, 1);
    for (const auto& a : md.units) CHECK(a.ord() == 0);
    CHECK(verify_morse(md, f, 100).ok);
    CHECK(unit_jacobian_certificate(md.T));
}

TEST_CASE("normal form in three variables") {
    auto cfg = FieldConfig::padic(7, 20);
    auto f = poly(cfg, 3, 8, {{{2, 0, 0}, 1}, {{0, 2, 0}, 1}, {{0, 0, 2}, 1}, {{1, 1, 1}, 1}});
    std::vector<LocalNum> x0(3, LocalNum::zero(cfg));
    auto md = morse_normal_form(f, x0, 1);
    CHECK(verify_morse(md, f, 30).ok);
}

TEST_CASE("normal form at a translated critical point") {
    auto cfg = FieldConfig::padic(5, 20);
    // f = (x - 3)^2: critical point at 3.
    auto f = poly(cfg, 1, 12, {{{2}, 1}, {{1}, -6}, {{0}, 9}});
    auto md = morse_normal_form(f, {LocalNum::from_integer(cfg, 3)}, 1);
    CHECK(md.units[0] == LocalNum::from_integer(cfg, 1));
    CHECK(verify_morse(md, f, 100).ok);
}

TEST_CASE("normal form off a nondegenerate lift: x^3 - 3x at x0 = 1") {
    for (long p : {5L, 7L}) {
        auto cfg = FieldConfig::padic(p, 20);
        auto f = poly(cfg, 1, 12, {{{3}, 1}, {{1}, -3}});
        auto md = morse_normal_form(f, {LocalNum::from_integer(cfg, 1)}, 1);
        CHECK(md.units[0] == LocalNum::from_integer(cfg, 3));
        CHECK(verify_morse(md, f, 100).ok);
    }
}

TEST_CASE("normal form rejects non-critical centers and degenerate Hessians") {
    auto cfg = FieldConfig::padic(5, 16);
    auto f = poly(cfg, 1, 12, {{{2}, 1}, {{1}, 1}});
    CHECK_THROWS_AS(morse_normal_form(f, {LocalNum::zero(cfg)}, 1), Error);
    auto g = poly(cfg, 1, 12, {{{2}, 5}, {{3}, 1}}); // Hess(0) = 2 * 5
    CHECK_THROWS_AS(morse_normal_form(g, {LocalNum::zero(cfg)}, 1), Error);
}

TEST_CASE("identity phase in two variables, many samples") {
    auto cfg = FieldConfig::padic(3, 20);
    auto f = poly(cfg, 2, 12, {{{2, 0}, 1}, {{0, 2}, 1}});
    std::vector<LocalNum> x0 = {LocalNum::zero(cfg), LocalNum::zero(cfg)};
    auto md = morse_normal_form(f, x0, 2);
    auto check = verify_morse(md, f, 1000);
    CHECK(check.ok);
    CHECK(check.samples == 1000);
}
