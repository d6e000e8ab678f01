#include <doctest.h>

#include "nasp/stationary.hpp"

using namespace nasp;

namespace {

MultiSeries poly(const FieldConfig& cfg, int n, int D, std::initializer_list<std::pair<Monomial, long>> terms) {
    MultiSeries s(cfg, n, D);
    for (const auto& [m, c] : terms) s.add_term(m, LocalNum::from_integer(cfg, c));
    return s;
}

Region units_shell(const FieldConfig& cfg, int n) {
    return Region::full(cfg, n).minus({Coset::polydisc(n, 1)});
}

} // namespace

TEST_CASE("nonstationary bound: linear phase on O") {
    auto cfg = FieldConfig::padic(5, 16);
    auto f = poly(cfg, 1, 12, {{{1}, 1}});
    auto phi = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
    auto nb = nonstationary_bound(f, phi, Region::full(cfg, 1));
    CHECK(nb.grad_ord_max == 0);
    CHECK(nb.tail_ord_min == LocalNum::kInfOrd); // no quadratic tail
    CHECK(nb.n1 == 0);
    // The contract: vanishing for every ord lambda <= n1.
    for (long o : {0L, -1L, -2L})
        for (long u = 1; u < 5; ++u)
            CHECK(oscillatory_brute(f, phi, LocalNum::unit_rep(cfg, u, o), Region::full(cfg, 1)).is_zero());
}

TEST_CASE("nonstationary bound: x^2 away from its critical point") {
    for (auto kind : {Kind::padic, Kind::laurent}) {
        auto cfg = kind == Kind::padic ? FieldConfig::padic(5, 16) : FieldConfig::laurent(5, 16);
        auto f = poly(cfg, 1, 12, {{{2}, 1}});
        auto shell = units_shell(cfg, 1);
        auto phi = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0)).restrict(shell);
        auto nb = nonstationary_bound(f, phi, shell);
        CHECK(nb.grad_ord_max == 0);
        CHECK(nb.n1 == -1);
        for (long o : {-1L, -2L, -3L})
            CHECK(oscillatory_brute(f, phi, LocalNum::unit_rep(cfg, 2, o), shell).is_zero());
        // One level outside the guarantee the integral is nonzero.
        CHECK_FALSE(oscillatory_brute(f, phi, LocalNum::unit_rep(cfg, 1, 0), shell).is_zero());
    }
}

TEST_CASE("nonstationary bound refuses regions with critical points") {
    auto cfg = FieldConfig::padic(5, 16);
    auto f = poly(cfg, 1, 12, {{{2}, 1}});
    auto phi = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
    CHECK_THROWS_AS(nonstationary_bound(f, phi, Region::full(cfg, 1)), Error);
}

TEST_CASE("theta support bound") {
    auto cfg = FieldConfig::padic(5, 20);
    auto f = poly(cfg, 1, 12, {{{2}, 1}, {{3}, 1}});
    auto md = morse_normal_form(f, {LocalNum::zero(cfg)}, 1);

    auto tb = theta_support_bound(StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0)), md);
    CHECK(tb.beta == 0);
    CHECK(tb.certified);

    auto tb2 = theta_support_bound(StepFunction::indicator(cfg, 1, Coset::polydisc(1, 2)), md);
    CHECK(tb2.beta == -1);
    CHECK(tb2.certified);
}

TEST_CASE("certificate for the pure square phase") {
    for (auto kind : {Kind::padic, Kind::laurent}) {
        auto cfg = kind == Kind::padic ? FieldConfig::padic(5, 20) : FieldConfig::laurent(5, 20);
        auto f = poly(cfg, 1, 12, {{{2}, 1}});
        auto phi = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
        auto omega = Region::full(cfg, 1);
        auto cert = stationary_phase(f, phi, omega);
        REQUIRE(cert.points.size() == 1);
        CHECK(cert.alpha == 1);
        CHECK(cert.points[0].md.units[0] == LocalNum::from_integer(cfg, 1));
        CHECK(cert.points[0].beta == 0);
        CHECK(cert.n1.value() == -1);
        CHECK(cert.N == -1);
        auto rep = verify_certificate(cert, f, phi, omega, {-1, -2, -3, -4});
        CHECK(rep.all_equal);
        CHECK(rep.records.size() == 4 * 4);
    }
}

TEST_CASE("certificate for x^2 + x^3 across primes") {
    for (long p : {3L, 5L, 7L}) {
        auto cfg = FieldConfig::padic(p, 24);
        auto f = poly(cfg, 1, 12, {{{2}, 1}, {{3}, 1}});
        auto phi = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
        auto omega = Region::full(cfg, 1);
        auto cert = stationary_phase(f, phi, omega);
        // The second critical point -2/3 is integral only when p != 3.
        CHECK(cert.points.size() == (p == 3 ? 1 : 2));
        auto rep = verify_certificate(cert, f, phi, omega, {cert.N, cert.N - 1, cert.N - 2});
        CHECK(rep.all_equal);
    }
}

TEST_CASE("two-ball corollary phase x^3 - 3x") {
    auto cfg = FieldConfig::padic(7, 24);
    auto f = poly(cfg, 1, 12, {{{3}, 1}, {{1}, -3}});
    std::vector<LocalNum> one = {LocalNum::from_integer(cfg, 1)};
    std::vector<LocalNum> minus_one = {LocalNum::from_integer(cfg, -1)};
    auto phi = StepFunction::indicator(cfg, 1, Coset::from_point(one, 1)) +
               StepFunction::indicator(cfg, 1, Coset::from_point(minus_one, 1));
    auto omega = Region::full(cfg, 1);
    auto cert = stationary_phase(f, phi, omega);
    REQUIRE(cert.points.size() == 2);
    CHECK(cert.alpha == 1);
    auto rep = verify_certificate(cert, f, phi, omega, {cert.N, cert.N - 1});
    CHECK(rep.all_equal);
}

TEST_CASE("alpha and the units are independent of phi") {
    auto cfg = FieldConfig::padic(5, 20);
    auto f = poly(cfg, 1, 12, {{{2}, 1}, {{3}, 1}});
    auto omega = Region::full(cfg, 1);
    auto phi1 = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
    // Different values, same critical-point membership.
    auto phi2 = phi1.scaled(CycloNum::rational(5, mpq_class(2, 3))) +
                StepFunction::indicator(cfg, 1, Coset::polydisc(1, 1)).scaled(CycloNum::zeta_pow(5, 1, 1));
    auto c1 = stationary_phase(f, phi1, omega);
    auto c2 = stationary_phase(f, phi2, omega);
    CHECK(c1.alpha == c2.alpha);
    REQUIRE(c1.points.size() == c2.points.size());
    for (size_t j = 0; j < c1.points.size(); ++j) {
        REQUIRE(c1.points[j].md.units.size() == c2.points[j].md.units.size());
        for (size_t i = 0; i < c1.points[j].md.units.size(); ++i)
            CHECK(c1.points[j].md.units[i] == c2.points[j].md.units[i]);
    }
}

TEST_CASE("closed rhs depends on lambda only through ord and low digits") {
    auto cfg = FieldConfig::padic(5, 20);
    auto f = poly(cfg, 1, 12, {{{2}, 1}, {{3}, 1}});
    auto phi = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
    auto cert = stationary_phase(f, phi, Region::full(cfg, 1));
    long o = cert.N;
    auto lam1 = LocalNum::unit_rep(cfg, 2, o);
    // lam2 = lam1 (1 + w^(1-o)): same ord, same digits through position 0.
    auto lam2 = lam1 * (LocalNum::from_integer(cfg, 1) + LocalNum::uniformizer_pow(cfg, 1 - o));
    CHECK(cert.closed_rhs(lam1) == cert.closed_rhs(lam2));
}

TEST_CASE("outside the guarantee the sides may differ, and that is reported") {
    auto cfg = FieldConfig::padic(5, 20);
    auto f = poly(cfg, 1, 12, {{{2}, 1}});
    auto phi = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
    auto omega = Region::full(cfg, 1);
    auto cert = stationary_phase(f, phi, omega);
    auto rep = verify_certificate(cert, f, phi, omega, {cert.N + 1});
    // Informative only: records exist, equality not asserted by the theorem.
    CHECK(rep.records.size() == 4);
    auto empty = verify_certificate(cert, f, phi, omega, {});
    CHECK(empty.records.empty());
    CHECK(empty.all_equal);
}

TEST_CASE("laurent certificates also verify") {
    auto cfg = FieldConfig::laurent(7, 24);
    auto f = poly(cfg, 1, 12, {{{3}, 1}, {{1}, -3}});
    auto phi = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
    auto omega = Region::full(cfg, 1);
    auto cert = stationary_phase(f, phi, omega);
    CHECK(cert.points.size() == 2);
    auto rep = verify_certificate(cert, f, phi, omega, {cert.N, cert.N - 1});
    CHECK(rep.all_equal);
}

TEST_CASE("alpha grows until the polydisc fits the region") {
    auto cfg = FieldConfig::padic(5, 24);
    auto f = poly(cfg, 1, 12, {{{2}, 1}});
    Region omega(cfg, 1, {Coset::polydisc(1, 2)});
    auto phi = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 2));
    auto cert = stationary_phase(f, phi, omega);
    CHECK(cert.alpha == 2);
    auto rep = verify_certificate(cert, f, phi, omega, {cert.N, cert.N - 1, cert.N - 2});
    CHECK(rep.all_equal);
}

TEST_CASE("certificates with non-indicator weights") {
    auto cfg = FieldConfig::padic(5, 24);
    auto f = poly(cfg, 1, 12, {{{2}, 1}, {{3}, 1}});
    auto omega = Region::full(cfg, 1);
    // Distinct cyclotomic values on the depth-1 cosets.
    std::vector<Cell> cells;
    for (long r = 0; r < 5; ++r) {
        std::vector<LocalNum> pt = {LocalNum::from_integer(cfg, r)};
        cells.push_back(Cell{Coset::from_point(pt, 1),
                             CycloNum::zeta_pow(5, 1, r).scaled(mpq_class(r + 1, 3))});
    }
    auto phi = StepFunction(cfg, 1, std::move(cells));
    auto cert = stationary_phase(f, phi, omega);
    auto rep = verify_certificate(cert, f, phi, omega, {cert.N, cert.N - 1, cert.N - 2});
    CHECK(rep.all_equal);
}

TEST_CASE("three-variable certificate") {
    auto cfg = FieldConfig::padic(5, 24);
    auto f = poly(cfg, 3, 10,
                  {{{2, 0, 0}, 1}, {{0, 2, 0}, 1}, {{0, 0, 2}, 1}, {{1, 1, 1}, 1}, {{3, 0, 0}, 1}});
    auto phi = StepFunction::indicator(cfg, 3, Coset::polydisc(3, 0));
    auto omega = Region::full(cfg, 3);
    auto cert = stationary_phase(f, phi, omega);
    REQUIRE(cert.points.size() >= 1);
    for (const auto& pt : cert.points) CHECK(pt.md.units.size() == 3);
    auto rep = verify_certificate(cert, f, phi, omega, {cert.N, cert.N - 1});
    CHECK(rep.all_equal);
}

TEST_CASE("equality persists well below the certified bound") {
    auto cfg = FieldConfig::padic(3, 24);
    auto f = poly(cfg, 1, 12, {{{2}, 1}, {{3}, 1}});
    auto phi = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
    auto omega = Region::full(cfg, 1);
    auto cert = stationary_phase(f, phi, omega);
    auto rep = verify_certificate(cert, f, phi, omega, {cert.N - 6, cert.N - 7});
    CHECK(rep.all_equal);
}

TEST_CASE("two-variable certificate: x^2 + xy + y^2") {
    auto cfg = FieldConfig::padic(5, 24);
    auto f = poly(cfg, 2, 12, {{{2, 0}, 1}, {{1, 1}, 1}, {{0, 2}, 1}});
    auto phi = StepFunction::indicator(cfg, 2, Coset::polydisc(2, 0));
    auto omega = Region::full(cfg, 2);
    auto cert = stationary_phase(f, phi, omega);
    REQUIRE(cert.points.size() == 1);
    CHECK(cert.N == -1);
    auto rep = verify_certificate(cert, f, phi, omega, {-1, -2});
    CHECK(rep.all_equal);
}
