#include <doctest.h>

#include <random>

#include "crystalline/generators.hpp"
#include "crystalline/model.hpp"

using namespace crystalline;

namespace {

CanonicalTerm term(double tau, double omega, int l, int p, cplx c) {
    CanonicalTerm t;
    t.tau = Coord::from_double(tau);
    t.omega = Coord::from_double(omega);
    t.l = l;
    t.p = p;
    t.c = c;
    return t;
}

CanonicalTerm term_q(Rational tau, Rational omega, int l, int p, cplx c) {
    CanonicalTerm t;
    t.tau = Coord(tau);
    t.omega = Coord(omega);
    t.l = l;
    t.p = p;
    t.c = c;
    return t;
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("normalize reduces omega mod 1/a") {
    CrystallineDistribution d{Lattice(Coord(Rational(1))),
                              {term_q(Rational(0), Rational(5, 4), 0, 0, {1, 0})}};
    auto n = normalize(d);
    REQUIRE(n.terms.size() == 1);
    CHECK(n.terms[0].omega.rat() == Rational(1, 4));
    CHECK(n.terms[0].omega.is_exact());
}

TEST_CASE("normalize cancels opposite terms") {
    CrystallineDistribution d{Lattice(Coord(Rational(1))),
                              {term_q(Rational(0), Rational(0), 0, 0, {1, 0}),
                               term_q(Rational(0), Rational(0), 0, 0, {-1, 0})}};
    CHECK(normalize(d).terms.empty());
}

TEST_CASE("normalize leaves canonical input unchanged") {
    CrystallineDistribution d{Lattice(Coord(Rational(1))),
                              {term_q(Rational(1, 2), Rational(0), 1, 2, {0, 3})}};
    auto n = normalize(d);
    REQUIRE(n.terms.size() == 1);
    CHECK(n.terms[0].tau.rat() == Rational(1, 2));
    CHECK(n.terms[0].l == 1);
    CHECK(n.terms[0].p == 2);
    CHECK(n.terms[0].c == cplx{0, 3});
}

TEST_CASE("normalize is idempotent") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        auto d = gen::random_distribution(rng);
        auto n1 = normalize(d);
        auto n2 = normalize(n1);
        REQUIRE(n1.terms.size() == n2.terms.size());
        for (std::size_t i = 0; i < n1.terms.size(); ++i) {
            CHECK(same_term_key(n1.terms[i], n2.terms[i]));
            CHECK(n1.terms[i].c == n2.terms[i].c);
        }
    }
}

TEST_CASE("normalize prunes relative to the largest coefficient") {
    CrystallineDistribution d{Lattice(Coord(Rational(1))),
                              {term_q(Rational(0), Rational(0), 0, 0, {1e6, 0}),
                               term_q(Rational(1, 4), Rational(0), 0, 0, {1e-8, 0})}};
    CHECK(normalize(d).terms.size() == 1);
}

TEST_CASE("reflect maps term keys and signs") {
    CrystallineDistribution d{Lattice(Coord(Rational(1))),
                              {term_q(Rational(1, 4), Rational(1, 8), 1, 2, {2, 0})}};
    auto r = reflect(d);
    REQUIRE(r.terms.size() == 1);
    CHECK(r.terms[0].tau.rat() == Rational(-1, 4));
    CHECK(r.terms[0].omega.rat() == Rational(7, 8));  // -1/8 mod 1
    CHECK(r.terms[0].l == 1);
    CHECK(r.terms[0].p == 2);
    CHECK(r.terms[0].c == cplx{-2, 0});  // (-1)^{l+p} = -1
}

TEST_CASE("unit-lattice rescale round trips") {
    CrystallineDistribution d{Lattice(Coord(Rational(1, 2))),
                              {term_q(Rational(1, 4), Rational(1, 3), 1, 2, {1.5, -0.5}),
                               term_q(Rational(0), Rational(0), 0, 1, {0, 1})}};
    auto unit = to_unit_lattice(d);
    CHECK(unit.lattice.step.rat() == Rational(1));
    auto back = from_unit_lattice(unit, Coord(Rational(1, 2)));
    REQUIRE(back.terms.size() == d.terms.size());
    for (std::size_t i = 0; i < d.terms.size(); ++i) {
        CHECK(same_term_key(back.terms[i], d.terms[i]));
        CHECK(std::abs(back.terms[i].c - d.terms[i].c) < 1e-14);
    }
}

TEST_CASE("distribution order") {
    CrystallineDistribution d{Lattice(Coord(Rational(1))),
                              {term(0, 0, 0, 2, {1, 0}), term(0.5, 0, 1, 0, {1, 0})}};
    CHECK(distribution_order(d) == 2);
    CHECK(distribution_order({Lattice(Coord(Rational(1))), {}}) == 0);
}

TEST_SUITE_END();
