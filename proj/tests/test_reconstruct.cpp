#include <doctest.h>

#include <random>
#include <set>

#include "crystalline/generators.hpp"
#include "crystalline/reconstruct.hpp"
#include "crystalline/transform.hpp"

using namespace crystalline;
namespace rc = crystalline::reconstruct;

namespace {

std::vector<double> translate_list(const CrystallineDistribution& d) {
    std::vector<double> taus;
    for (const auto& t : d.terms) {
        const double v = t.tau.value();
        bool seen = false;
        for (double w : taus)
            if (std::abs(v - w) < 1e-9) seen = true;
        if (!seen) taus.push_back(v);
    }
    return taus;
}

/// Key-wise comparison of two normalized distributions with tolerance on the
/// float coordinates. Returns the max relative coefficient error; spurious or
/// missing terms count as failure via REQUIRE.
double compare_term_sets(const CrystallineDistribution& got,
                         const CrystallineDistribution& want) {
    REQUIRE(got.terms.size() == want.terms.size());
    double worst = 0.0;
    std::vector<bool> used(want.terms.size(), false);
    for (const auto& g : got.terms) {
        bool matched = false;
        for (std::size_t i = 0; i < want.terms.size(); ++i) {
            if (used[i]) continue;
            const auto& w = want.terms[i];
            if (g.l != w.l || g.p != w.p) continue;
            if (std::abs(g.tau.value() - w.tau.value()) > 1e-7) continue;
            double dw = std::abs(g.omega.value() - w.omega.value());
            dw = std::min(dw, 1.0 - dw);
            if (dw > 1e-7) continue;
            used[i] = true;
            matched = true;
            worst = std::max(worst, std::abs(g.c - w.c) / std::abs(w.c));
            break;
        }
        REQUIRE(matched);
    }
    return worst;
}

}  // namespace

TEST_SUITE_BEGIN("reconstruct");

TEST_CASE("confluent 2x2 hand value") {
    // tau = (0, 1/2), k = 0: z = (1, -1), M = [[1,1],[1,-1]], det = -2
    auto cm = rc::build_confluent({cplx{1, 0}, cplx{-1, 0}}, 0);
    REQUIRE(cm.M.rows() == 2);
    CHECK(std::abs(cm.M(0, 0) - cplx{1, 0}) < 1e-15);
    CHECK(std::abs(cm.M(0, 1) - cplx{1, 0}) < 1e-15);
    CHECK(std::abs(cm.M(1, 0) - cplx{1, 0}) < 1e-15);
    CHECK(std::abs(cm.M(1, 1) - cplx{-1, 0}) < 1e-15);
    CHECK(std::abs(cm.M.determinant() - cplx{-2, 0}) < 1e-14);
}

TEST_CASE("confluent 1x1 trivial case") {
    auto cm = rc::build_confluent({cplx{1, 0}}, 0);
    REQUIRE(cm.M.rows() == 1);
    CHECK(std::abs(cm.M(0, 0) - cplx{1, 0}) < 1e-15);
}

TEST_CASE("confluent preconditions") {
    CHECK_THROWS_AS(rc::build_confluent({cplx{0, 0}}, 0), std::invalid_argument);
    CHECK_THROWS_AS(rc::build_confluent({cplx{1, 0}, cplx{1, 0}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(rc::build_confluent({}, 0), std::invalid_argument);
}

TEST_CASE("100 random confluent configurations solve cleanly") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> n_nodes(1, 4);
    std::uniform_int_distribution<int> pick_k(0, 3);
    std::uniform_real_distribution<double> angle(0.0, 1.0);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int N = n_nodes(rng);
        std::vector<cplx> nodes;
        int guard = 0;
        while (int(nodes.size()) < N && guard++ < 1000) {
            const cplx z = unit_phase(angle(rng));
            bool ok = true;
            for (const auto& w : nodes)
                if (std::abs(z - w) < 0.1) ok = false;
            if (ok) nodes.push_back(z);
        }
        const int k = pick_k(rng);
        auto cm = rc::build_confluent(nodes, k);
        CHECK(std::abs(cm.M.determinant()) > 0.0);
        // Consistent data, as the translate systems produce: rhs = M x_true.
        Eigen::VectorXcd x_true(cm.M.cols());
        for (Eigen::Index i = 0; i < x_true.size(); ++i) x_true(i) = cplx{val(rng), val(rng)};
        const Eigen::VectorXcd rhs = cm.M * x_true;
        auto sol = rc::solve_confluent(cm, rhs);
        CHECK(sol.residual_inf < 1e-8);
    }
}

TEST_CASE("triangular chi closed forms for small k") {
    auto chi0 = rc::triangular_chi(0);
    CHECK(chi0.at(0, 0) == rc::RatPoly::constant(Rational(1)));

    auto chi1 = rc::triangular_chi(1);
    CHECK(chi1.at(0, 0) == rc::RatPoly::constant(Rational(1)));
    CHECK(chi1.at(0, 1) == rc::RatPoly::zero());
    CHECK(chi1.at(1, 0) == rc::RatPoly{{Rational(0), Rational(-1)}});  // -v
    CHECK(chi1.at(1, 1) == rc::RatPoly::constant(Rational(1)));

    auto chi2 = rc::triangular_chi(2);
    CHECK(chi2.at(2, 0) == rc::RatPoly{{Rational(0), Rational(0), Rational(1)}});  // v^2
    CHECK(chi2.at(2, 1) == rc::RatPoly{{Rational(0), Rational(-2)}});              // -2v
    CHECK(chi2.at(1, 0) == rc::RatPoly{{Rational(0), Rational(-1)}});              // -v
}

TEST_CASE("M(t) chi(t) = I exactly for k <= 6") {
    for (int k = 0; k <= 6; ++k) {
        auto M = rc::leibniz_matrix(k);
        auto chi = rc::triangular_chi(k);
        CHECK(rc::is_identity(rc::poly_matrix_product(M, chi)));
        CHECK(rc::is_identity(rc::poly_matrix_product(chi, M)));
        // closed form chi_{p,l} = binom(p,l) (-v)^{p-l}
        for (int p = 0; p <= k; ++p)
            for (int l = 0; l <= p; ++l) {
                rc::RatPoly want;
                want.coeffs.assign(std::size_t(p - l) + 1, Rational(0));
                const std::int64_t sign = (p - l) % 2 ? -1 : 1;
                want.coeffs[std::size_t(p - l)] = Rational(sign * binomial_exact(p, l));
                CHECK(chi.at(p, l) == want);
            }
    }
}

TEST_CASE("expand basic sequences") {
    // term (0,0,1,0,1): a_{0,0}(lam) = lam
    CrystallineDistribution d{Lattice(Coord(Rational(1))), {}};
    d.terms.push_back({Coord(Rational(0)), Coord(Rational(0)), 1, 0, {1, 0}});
    auto td = rc::expand(d, {0.0}, 4);
    const auto* seq = td.find(0, 0);
    REQUIRE(seq != nullptr);
    for (long lam = -4; lam <= 4; ++lam)
        CHECK(std::abs((*seq)[std::size_t(lam + 4)] - cplx{double(lam), 0}) < 1e-14);
}

TEST_CASE("expand modulated derivative term") {
    // term (0.5, 0.25, 0, 1, 2): a_{j(0.5), 1}(lam) = 2 e^{2 pi i lam/4}
    CrystallineDistribution d{Lattice(Coord(Rational(1))), {}};
    d.terms.push_back({Coord(Rational(1, 2)), Coord(Rational(1, 4)), 0, 1, {2, 0}});
    auto td = rc::expand(d, {0.0, 0.5}, 4);
    const auto* seq = td.find(1, 1);
    REQUIRE(seq != nullptr);
    for (long lam = -4; lam <= 4; ++lam)
        CHECK(std::abs((*seq)[std::size_t(lam + 4)] - 2.0 * unit_phase(0.25 * double(lam))) <
              1e-14);
    CHECK(td.find(0, 0) == nullptr);
}

TEST_CASE("expand re-indexes tau shifted by whole lattice steps") {
    // tau = 1.5 matches translate 0.5 with shift 1: weight (lam-1)^1
    CrystallineDistribution d{Lattice(Coord(Rational(1))), {}};
    d.terms.push_back({Coord(Rational(3, 2)), Coord(Rational(0)), 1, 0, {1, 0}});
    auto td = rc::expand(d, {0.5}, 4);
    const auto* seq = td.find(0, 0);
    REQUIRE(seq != nullptr);
    for (long lam = -4; lam <= 4; ++lam)
        CHECK(std::abs((*seq)[std::size_t(lam + 4)] - cplx{double(lam - 1), 0}) < 1e-14);
}

TEST_CASE("expand error paths") {
    CrystallineDistribution d{Lattice(Coord(Rational(2))), {}};
    d.terms.push_back({Coord(Rational(0)), Coord(Rational(0)), 0, 0, {1, 0}});
    CHECK_THROWS_AS(rc::expand(d, {0.0}, 4), std::invalid_argument);  // non-unit lattice
    CrystallineDistribution u{Lattice(Coord(Rational(1))), {}};
    u.terms.push_back({Coord(Rational(1, 3)), Coord(Rational(0)), 0, 0, {1, 0}});
    CHECK_THROWS_AS(rc::expand(u, {0.0}, 4), std::invalid_argument);  // unmatched tau
    CHECK_THROWS_AS(rc::expand(u, {1.0 / 3, 1.0 / 3 + 1e-12}, 4),
                    std::invalid_argument);  // residue collision
}

TEST_CASE("prony recovers a single exponential node") {
    const long W = 24;
    std::vector<cplx> seq;
    for (long lam = -W; lam <= W; ++lam) seq.push_back(unit_phase(0.25 * double(lam)));
    auto nu = rc::prony_recover(seq, W);
    REQUIRE(nu.nodes.size() == 1);
    CHECK(nu.nodes[0].s == doctest::Approx(0.25).epsilon(1e-10));
    REQUIRE(nu.nodes[0].dcoeffs.size() == 1);
    CHECK(std::abs(nu.nodes[0].dcoeffs[0] - cplx{1, 0}) < 1e-9);
    // forward oracle
    for (long lam = -W; lam <= W; ++lam)
        CHECK(std::abs(nu.sequence_value(double(lam)) - seq[std::size_t(lam + W)]) < 1e-9);
}

TEST_CASE("prony recovers a node with polynomial weight") {
    const long W = 24;
    std::vector<cplx> seq;
    for (long lam = -W; lam <= W; ++lam)
        seq.push_back(double(lam) * unit_phase(0.1 * double(lam)));
    auto nu = rc::prony_recover(seq, W);
    REQUIRE(nu.nodes.size() == 1);
    CHECK(nu.nodes[0].s == doctest::Approx(0.1).epsilon(1e-9));
    REQUIRE(nu.nodes[0].dcoeffs.size() == 2);
    // lam e^{2 pi i 0.1 lam} = d (-2 pi i lam) e^{...} with d = -1/(2 pi i)
    CHECK(std::abs(nu.nodes[0].dcoeffs[1] - (cplx{-1, 0} / kTwoPiI)) < 1e-9);
    for (long lam = -W; lam <= W; ++lam)
        CHECK(std::abs(nu.sequence_value(double(lam)) - seq[std::size_t(lam + W)]) <
              1e-8 * double(W));
}

TEST_CASE("prony on the zero sequence returns the empty distribution") {
    std::vector<cplx> seq(2 * 16 + 1, cplx{0, 0});
    CHECK(rc::prony_recover(seq, 16).empty());
}

TEST_CASE("prony validates the sample-count contract") {
    std::vector<cplx> seq(10, cplx{1, 0});
    CHECK_THROWS_AS(rc::prony_recover(seq, 16), std::invalid_argument);
    CHECK_THROWS_AS(rc::prony_recover_hinted(seq, 16, {0.25}), std::invalid_argument);
}

TEST_CASE("prony rejects a non exponential-polynomial sequence") {
    const long W = 32;
    std::vector<cplx> seq;
    for (long lam = -W; lam <= W; ++lam)
        seq.push_back(cplx{1.0 / (1.0 + double(lam * lam)), 0.0});
    CHECK_THROWS_AS(rc::prony_recover(seq, W), rc::ModelOrderOverflow);
}

TEST_CASE("prony handles nodes split across the arg branch cut") {
    const long W = 24;
    std::vector<cplx> seq;
    for (long lam = -W; lam <= W; ++lam)
        seq.push_back(double(lam) * unit_phase(0.5 * double(lam)));  // node at -1
    auto nu = rc::prony_recover(seq, W);
    REQUIRE(nu.nodes.size() == 1);
    CHECK(nu.nodes[0].s == doctest::Approx(0.5).epsilon(1e-9));
    REQUIRE(nu.nodes[0].dcoeffs.size() == 2);
}

TEST_CASE("prony nodes land in the fundamental interval") {
    // frequencies alias modulo 1; the recovered nodes come back in [0,1)
    const long W = 24;
    std::vector<cplx> seq;
    for (long lam = -W; lam <= W; ++lam)
        seq.push_back(unit_phase(-0.3 * double(lam)) + 2.0 * unit_phase(1.85 * double(lam)));
    auto nu = rc::prony_recover(seq, W);
    REQUIRE(nu.nodes.size() == 2);
    for (const auto& n : nu.nodes) {
        CHECK(n.s >= 0.0);
        CHECK(n.s < 1.0);
    }
    CHECK(nu.nodes[0].s == doctest::Approx(0.7).epsilon(1e-9));   // -0.3 mod 1
    CHECK(nu.nodes[1].s == doctest::Approx(0.85).epsilon(1e-9));  // 1.85 mod 1
}

TEST_CASE("reconstruct identity round trip for the unit comb") {
    CrystallineDistribution d{Lattice(Coord(Rational(1))), {}};
    d.terms.push_back({Coord(Rational(0)), Coord(Rational(0)), 0, 0, {1, 0}});
    auto td = rc::expand(d, {0.0}, 24);
    auto rec = rc::reconstruct(td);
    REQUIRE(rec.terms.size() == 1);
    CHECK(rec.terms[0].l == 0);
    CHECK(rec.terms[0].p == 0);
    CHECK(std::abs(rec.terms[0].tau.value()) < 1e-12);
    CHECK(std::abs(rec.terms[0].omega.value()) < 1e-9);
    CHECK(std::abs(rec.terms[0].c - cplx{1, 0}) < 1e-9);
}

TEST_CASE("reconstruct round trip on random canonical data") {
    std::mt19937_64 rng(31337);
    for (int done = 0; done < 12; ++done) {
        auto d = gen::random_distribution(rng);
        auto taus = translate_list(d);
        auto td = rc::expand(d, taus, 64);
        auto rec = rc::reconstruct(td);
        const double err = compare_term_sets(rec, d);
        CHECK(err < 1e-6);
    }
}

TEST_CASE("reconstruct with a spectrum hint skips the node search") {
    CrystallineDistribution d{Lattice(Coord(Rational(1))), {}};
    d.terms.push_back({Coord(Rational(0)), Coord(Rational(1, 4)), 1, 0, {1.5, 0.5}});
    d.terms.push_back({Coord(Rational(0)), Coord(Rational(5, 8)), 0, 1, {0, -2}});
    d = normalize(d);
    auto td = rc::expand(d, {0.0}, 32);
    PointSet hint({-0.75, 0.25, 1.625}, 2.0);  // residues 0.25 and 0.625
    auto rec = rc::reconstruct(td, hint);
    CHECK(compare_term_sets(rec, d) < 1e-8);
}

TEST_CASE("reconstruct reports the offending sequence on overflow") {
    rc::TranslateDecomposition td;
    td.taus = {0.0};
    td.order = 0;
    td.window = 32;
    std::vector<cplx> seq;
    for (long lam = -32; lam <= 32; ++lam)
        seq.push_back(cplx{1.0 / (1.0 + double(lam * lam)), 0.0});
    td.sequences[{0, 0}] = seq;
    CHECK_THROWS_WITH_AS(rc::reconstruct(td), doctest::Contains("j=0"),
                         rc::ModelOrderOverflow);
}

TEST_CASE("expand o reconstruct o expand is expand") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        auto d = gen::random_distribution(rng);
        auto taus = translate_list(d);
        auto td = rc::expand(d, taus, 64);
        auto rec = rc::reconstruct(td);
        auto td2 = rc::expand(rec, taus, 64);
        double norm = 0.0;
        for (const auto& [k, s] : td.sequences)
            for (const auto& v : s) norm = std::max(norm, std::abs(v));
        for (const auto& [key, s] : td.sequences) {
            const auto* s2 = td2.find(key.first, key.second);
            REQUIRE(s2 != nullptr);
            for (std::size_t i = 0; i < s.size(); ++i)
                CHECK(std::abs(s[i] - (*s2)[i]) < 1e-6 * (1 + norm));
        }
    }
}

TEST_CASE("beta consistency: N=1, tau=0, k=0 gives beta = alpha hat") {
    CrystallineDistribution d{Lattice(Coord(Rational(1))), {}};
    d.terms.push_back({Coord(Rational(0)), Coord(Rational(0)), 0, 0, {1, 0}});
    auto rep = rc::beta_consistency(d, {0.0}, 6.0);
    CHECK(rep.pairs_checked == 1);
    CHECK(rep.max_discrepancy < 1e-12);
}

TEST_CASE("beta consistency on random inputs") {
    std::mt19937_64 rng(4242);
    gen::DistributionSpec spec;
    spec.max_translates = 3;
    spec.max_order = 2;
    spec.max_degree = 2;
    spec.max_terms = 5;
    for (int trial = 0; trial < 8; ++trial) {
        auto d = gen::random_distribution(rng, spec);
        auto taus = translate_list(d);
        auto rep = rc::beta_consistency(d, taus, 8.0);
        CHECK(rep.max_discrepancy < 1e-8);
        CHECK(rep.condition < 1e10);
    }
}

TEST_SUITE_END();
