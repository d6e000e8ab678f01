#include <doctest.h>

#include <random>

#include "nasp/charfun.hpp"

using namespace nasp;

namespace {

LocalNum random_window(std::mt19937& rng, const FieldConfig& cfg, long vmin, long vmax) {
    std::uniform_int_distribution<long> vd(vmin, vmax), dd(0, cfg.p - 1), lead(1, cfg.p - 1);
    std::vector<int64_t> ds(cfg.precision);
    ds[0] = lead(rng);
    for (int i = 1; i < cfg.precision; ++i) ds[i] = dd(rng);
    return LocalNum::from_digits(cfg, vd(rng), std::move(ds));
}

} // namespace

TEST_CASE("character conductor: trivial on m_K, nontrivial on O_K") {
    for (auto kind : {Kind::padic, Kind::laurent}) {
        auto cfg = kind == Kind::padic ? FieldConfig::padic(5, 8) : FieldConfig::laurent(5, 8);
        CHECK(psi(LocalNum::uniformizer_pow(cfg, 1)) == CycloNum::one(5));
        CHECK(psi(LocalNum::uniformizer_pow(cfg, 3)) == CycloNum::one(5));
        CHECK(psi(LocalNum::zero(cfg)) == CycloNum::one(5));
        CHECK(psi(LocalNum::from_integer(cfg, 1)) == CycloNum::zeta_pow(5, 1, 1));
        // Exhaustive on residue classes of O: psi(u) = zeta_p^u.
        for (long u = 0; u < 5; ++u)
            CHECK(psi(LocalNum::from_digits(cfg, 0, {u})) == CycloNum::zeta_pow(5, 1, u));
    }
}

TEST_CASE("psi has level matched to the pole order") {
    auto cfg = FieldConfig::padic(3, 10);
    auto x = LocalNum::uniformizer_pow(cfg, -2); // p^-2
    auto v = psi(x);
    CHECK(v.level() == 3);
    CHECK(v == CycloNum::zeta_pow(3, 3, 1)); // digits (1,0,0) from position -2 to 0
    auto y = LocalNum::unit_rep(cfg, 2, -1);  // 2/p
    CHECK(psi(y) == CycloNum::zeta_pow(3, 2, 2));
}

TEST_CASE("psi is an additive character on random pairs") {
    std::mt19937 rng(101);
    for (auto kind : {Kind::padic, Kind::laurent}) {
        auto cfg = kind == Kind::padic ? FieldConfig::padic(7, 12) : FieldConfig::laurent(7, 12);
        for (int t = 0; t < 200; ++t) {
            auto a = random_window(rng, cfg, -3, 2);
            auto b = random_window(rng, cfg, -3, 2);
            CHECK(psi(a + b) == psi(a) * psi(b));
        }
    }
}

TEST_CASE("psi needs digits down to position 0") {
    auto cfg = FieldConfig::padic(5, 4);
    auto x = LocalNum::unit_rep(cfg, 1, -6); // window [-6, -2): position 0 unknown
    CHECK_THROWS_AS(psi(x), Error);
}

TEST_CASE("psi_square_depth formula and guarantee") {
    auto cfg = FieldConfig::padic(3, 12);
    CHECK(psi_square_depth(LocalNum::zero(cfg)) == 0);
    CHECK(psi_square_depth(LocalNum::unit_rep(cfg, 1, -3)) == 4);
    CHECK(psi_square_depth(LocalNum::unit_rep(cfg, 2, 0)) == 1);
    CHECK(psi_square_depth(LocalNum::unit_rep(cfg, 1, 2)) == 0);

    // Exhaustive guarantee at p = 3, ord lambda = -2: beta = 3.
    auto lam = LocalNum::unit_rep(cfg, 2, -2);
    long beta = psi_square_depth(lam);
    CHECK(beta == 3);
    long P4 = 81;
    // Constancy on u + w^beta O, and sharpness one level up.
    bool sharp_witness = false;
    for (long u = 0; u < P4; ++u) {
        auto un = LocalNum::from_integer(cfg, u);
        auto base = psi(lam * un * un);
        for (long t = 1; t < 3; ++t) {
            auto shifted = un + LocalNum::unit_rep(cfg, t, beta);
            CHECK(psi(lam * shifted * shifted) == base);
            auto coarse = un + LocalNum::unit_rep(cfg, t, beta - 1);
            if (!(psi(lam * coarse * coarse) == base)) sharp_witness = true;
        }
    }
    CHECK(sharp_witness);
}

TEST_CASE("indicator evaluation and products") {
    auto cfg = FieldConfig::padic(5, 8);
    auto one_O = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
    auto one_pO = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 1));
    auto prod = one_O.product(one_pO);
    REQUIRE(prod.cells().size() == 1);
    CHECK(prod.cells()[0].coset.depth == 1);
    CHECK(prod.support_volume() == mpq_class(1, 5));

    auto ind2 = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 2));
    CHECK(ind2.eval({LocalNum::uniformizer_pow(cfg, 3)}) == CycloNum::one(5));
    CHECK(ind2.eval({LocalNum::from_integer(cfg, 1)}).is_zero());
}

TEST_CASE("disjointness is enforced") {
    auto cfg = FieldConfig::padic(3, 8);
    Coset a = Coset::polydisc(1, 0);
    Coset b = Coset::polydisc(1, 1);
    CHECK_THROWS_AS(StepFunction(cfg, 1, {Cell{a, CycloNum::one(3)}, Cell{b, CycloNum::one(3)}}), Error);
}

TEST_CASE("random product agrees with pointwise evaluation") {
    std::mt19937 rng(7);
    auto cfg = FieldConfig::padic(3, 8);
    std::uniform_int_distribution<long> dd(0, 2), depthd(0, 2), qd(-3, 3);
    auto random_sf = [&](int n) {
        std::vector<Cell> cells;
        for (int c = 0; c < 3; ++c) {
            long depth = depthd(rng);
            std::vector<LocalNum> pt;
            for (int i = 0; i < n; ++i) {
                std::vector<int64_t> ds;
                for (long k = 0; k < depth; ++k) ds.push_back(dd(rng));
                pt.push_back(LocalNum::from_digits(cfg, 0, std::move(ds)) + LocalNum::pseudo_zero(cfg, depth));
            }
            Cell cell{Coset::from_point(pt, depth), CycloNum::zeta_pow(3, 1, dd(rng)).scaled(mpq_class(qd(rng)))};
            bool ok = true;
            for (const auto& e : cells)
                if (e.coset.meets(cell.coset)) ok = false;
            if (ok) cells.push_back(std::move(cell));
        }
        return StepFunction(cfg, n, std::move(cells));
    };
    for (int t = 0; t < 30; ++t) {
        auto f = random_sf(2), g = random_sf(2);
        auto h = f.product(g);
        for (int s = 0; s < 20; ++s) {
            std::vector<LocalNum> x = {LocalNum::from_integer(cfg, dd(rng) + 3 * dd(rng) + 9 * dd(rng)),
                                       LocalNum::from_integer(cfg, dd(rng) + 3 * dd(rng) + 9 * dd(rng))};
            CHECK(h.eval(x) == f.eval(x) * g.eval(x));
        }
    }
}

TEST_CASE("sums refine overlapping cells") {
    auto cfg = FieldConfig::padic(3, 8);
    auto whole = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
    auto deep = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 1)).scaled(CycloNum::rational(3, 2));
    auto sum = whole + deep;
    CHECK(sum.eval({LocalNum::uniformizer_pow(cfg, 1)}) == CycloNum::rational(3, 3));
    CHECK(sum.eval({LocalNum::from_integer(cfg, 1)}) == CycloNum::one(3));
    // Adding the negative of a piece cancels it exactly.
    auto cancel = sum + deep.scaled(-CycloNum::one(3));
    CHECK(cancel.eval({LocalNum::uniformizer_pow(cfg, 1)}) == CycloNum::one(3));
}

TEST_CASE("sibling merge produces the normal form") {
    auto cfg = FieldConfig::padic(3, 8);
    std::vector<Cell> cells;
    for (long d0 = 0; d0 < 3; ++d0) {
        std::vector<LocalNum> pt = {LocalNum::from_integer(cfg, d0)};
        cells.push_back(Cell{Coset::from_point(pt, 1), CycloNum::rational(3, mpq_class(5))});
    }
    auto f = StepFunction(cfg, 1, std::move(cells));
    auto m = f.merged();
    REQUIRE(m.cells().size() == 1);
    CHECK(m.cells()[0].coset.depth == 0);
    // Merge preserves evaluation everywhere.
    for (long x = 0; x < 9; ++x)
        CHECK(m.eval({LocalNum::from_integer(cfg, x)}) == f.eval({LocalNum::from_integer(cfg, x)}));
}

TEST_CASE("negated cosets reflect membership") {
    auto cfg = FieldConfig::padic(5, 8);
    std::vector<LocalNum> pt = {LocalNum::from_integer(cfg, 2)};
    Coset c = Coset::from_point(pt, 2); // 2 + p^2 O
    Coset nc = c.negated(cfg);
    CHECK(nc.contains_point({LocalNum::from_integer(cfg, -2)}));
    CHECK(nc.contains_point({LocalNum::from_integer(cfg, -2 + 25)}));
    CHECK_FALSE(nc.contains_point({LocalNum::from_integer(cfg, 2)}));

    auto cfgl = FieldConfig::laurent(5, 8);
    std::vector<LocalNum> ptl = {LocalNum::from_integer(cfgl, 2)};
    Coset cl = Coset::from_point(ptl, 1);
    CHECK(cl.negated(cfgl).contains_point({LocalNum::from_integer(cfgl, 3)}));
}

TEST_CASE("regions: containment and complements") {
    auto cfg = FieldConfig::padic(3, 8);
    auto omega = Region::full(cfg, 1);
    auto phi = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 1));
    CHECK(omega.contains_support(phi));

    auto ball = Coset::polydisc(1, 1); // pO
    auto shell = omega.minus({ball});  // the units
    CHECK(shell.cosets().size() == 2);
    CHECK_FALSE(shell.contains_point({LocalNum::uniformizer_pow(cfg, 1)}));
    CHECK(shell.contains_point({LocalNum::from_integer(cfg, 2)}));

    auto phi_big = StepFunction::indicator(cfg, 1, Coset::polydisc(1, 0));
    Region small(cfg, 1, {ball});
    CHECK_FALSE(small.contains_support(phi_big));
}
