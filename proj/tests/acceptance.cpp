// Acceptance suite: one line per criterion, [PASS]/[FAIL] with the measured
// quantities and elapsed time; exit code is the number of failed criteria.
// Every tolerance is pinned in code next to the check it guards.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "crystalline/autocorr.hpp"
#include "crystalline/generators.hpp"
#include "crystalline/reconstruct.hpp"
#include "crystalline/spectral.hpp"
#include "crystalline/transform.hpp"

using namespace crystalline;
namespace ac = crystalline::autocorr;
namespace rc = crystalline::reconstruct;
namespace sp = crystalline::spectral;

namespace {

int failures = 0;

class Criterion {
public:
    Criterion(int number, std::string title)
        : number_(number), title_(std::move(title)),
          start_(std::chrono::steady_clock::now()) {}

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

    void report(bool ok, const std::string& detail) const {
        std::printf("[%s] %2d. %s — %s (%.2f s)\n", ok ? "PASS" : "FAIL", number_,
                    title_.c_str(), detail.c_str(), elapsed());
        if (!ok) ++failures;
    }

private:
    int number_;
    std::string title_;
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

FiniteOrderComb random_comb(std::mt19937_64& rng, int max_atoms, int max_k, double spread) {
    std::uniform_int_distribution<int> n_atoms(1, max_atoms);
    std::uniform_int_distribution<int> pick_k(0, max_k);
    std::uniform_real_distribution<double> pos(-spread, spread);
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 1.0);
    const int k = pick_k(rng);
    const int n = n_atoms(rng);
    std::vector<double> xs;
    while (int(xs.size()) < n) {
        const double x = pos(rng);
        bool ok = true;
        for (double y : xs)
            if (std::abs(x - y) < 0.15) ok = false;
        if (ok) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    std::vector<FiniteOrderComb::Atom> atoms;
    for (double x : xs) {
        FiniteOrderComb::Atom a;
        a.x = x;
        for (int p = 0; p <= k; ++p) a.coeffs.push_back(mag(rng) * unit_phase(phase(rng)));
        atoms.push_back(std::move(a));
    }
    return FiniteOrderComb(k, std::move(atoms), spread + 1.0);
}

void criterion_1_poisson_pairing() {
    Criterion c(1, "Poisson pairing identity");
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        auto d = gen::random_distribution(rng);
        auto ftd = fourier_transform(d);
        for (int j = 0; j < 5; ++j) {
            auto phi = gen::random_test_function(rng);
            const cplx lhs = action(ftd, phi, 1e-12);
            const cplx rhs = action(d, phi.fourier_transform(), 1e-12);
            worst = std::max(worst, std::abs(lhs - rhs) / (1 + std::abs(rhs)));
        }
    }
    const bool ok = worst < 1e-8 && c.elapsed() < 10.0;
    c.report(ok, fmt("100 pairings, worst scaled error %.2e (tol 1e-8)", worst));
}

void criterion_2_gap_density() {
    Criterion c(2, "gap-density theorem with sharp examples");
    const double eps = 0.1;
    auto z = PointSet::lattice(1.0, 1e4);
    const double dk = sp::density_DK(z, sp::default_schedule(1e4)).estimate;
    bool ok = std::abs(dk - 1.0) < 0.05;
    double worst_margin = 1e300;
    bool all_certified = true;
    for (int k = 0; k <= 3 && ok; ++k) {
        auto ex = sp::sharpness_example(k, eps);
        all_certified = all_certified && ex.certification.certified;
        const double bound = sp::gap_density_bound(ex.gap_hi - ex.gap_lo, k);
        const double margin = dk - bound;
        worst_margin = std::min(worst_margin, margin - (eps / double(k + 1) - 0.05));
        if (margin < eps / double(k + 1) - 0.05) ok = false;
    }
    ok = ok && all_certified && c.elapsed() < 30.0;
    c.report(ok, fmt("D_K(Z)@1e4 = %.4f, k=0..3 certified=%d, min margin slack %.3f", dk,
                     int(all_certified), worst_margin));
}

void criterion_3_carleman_cauchy() {
    Criterion c(3, "Carleman transform equals Cauchy transform");
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> re(-2.0, 2.0);
    std::uniform_real_distribution<double> im(0.5, 3.0);
    std::bernoulli_distribution flip(0.5);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        auto g = random_comb(rng, 6, 3, 4.0);
        const cplx z{re(rng), flip(rng) ? im(rng) : -im(rng)};
        const cplx a = sp::carleman_transform(g, z, 0.0, 1e-9);
        const cplx b = sp::cauchy_transform(g, z);
        worst = std::max(worst, std::abs(a - b) / (1 + std::abs(b)));
    }
    const bool ok = worst < 1e-6 && c.elapsed() < 60.0;
    c.report(ok, fmt("50 combs, worst relative error %.2e (tol 1e-6)", worst));
}

void criterion_4_jensen() {
    Criterion c(4, "Jensen residual constancy");
    std::mt19937_64 rng(404);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        auto g = random_comb(rng, 5, 3, 1.6);
        auto rows = sp::jensen_check(g, {2.0, 5.0, 10.0, 50.0});
        double mean = 0.0;
        for (const auto& r : rows) mean += r.residual;
        mean /= double(rows.size());
        double sd = 0.0;
        for (const auto& r : rows) sd += (r.residual - mean) * (r.residual - mean);
        sd = std::sqrt(sd / double(rows.size()));
        worst = std::max(worst, sd / (1 + std::abs(mean)));
    }
    const bool ok = worst < 1e-3;
    c.report(ok, fmt("10 combs, worst scaled stddev %.2e (tol 1e-3)", worst));
}

void criterion_5_autocorrelation() {
    Criterion c(5, "autocorrelation identities and witnesses");
    // Two pipeline distributions: one with modulated terms, one plain.
    auto build = [](bool modulated) {
        CanonicalTerm t0, t1;
        t0.tau = Coord(Rational(0));
        t0.omega = Coord(Rational(0));
        t0.l = 0;
        t0.p = 0;
        t0.c = {1.0, 0.0};
        t1.tau = Coord(Rational(0));
        t1.omega = modulated ? Coord(Rational(1, 4)) : Coord(Rational(0));
        t1.l = 0;
        t1.p = 1;
        t1.c = {0.0, 0.7};
        return normalize({Lattice(Coord(Rational(1))), {t0, t1}});
    };
    const double r = 0.25;
    TestFunction phi(0.0, 2.0 * 5.93 / r, 0.0);
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> us(-2.0, 2.0);

    double worst_id = 0.0, worst_vanish = 0.0;
    bool witnesses_ok = true;
    for (bool modulated : {true, false}) {
        auto alpha = build(modulated);
        auto b = multiply_by_schwartz(to_comb(alpha, 150.0), phi);
        const int k = b.order();
        // transform identity at 20 random u per (h, l)
        for (double h : {0.0, 1.0, 3.0}) {
            for (int l = 0; l <= 2 * k; ++l) {
                auto g = ac::gamma_hl(b, h, l);
                for (int i = 0; i < 20; ++i) {
                    const double u = us(rng);
                    const cplx lhs = sp::gamma_hat(g, u);
                    const cplx rhs = ac::A_coefficient(b, h, l, u);
                    worst_id = std::max(worst_id,
                                        std::abs(lhs - rhs) / (1 + std::abs(rhs)));
                }
            }
        }
        // witness for every h in the materialized difference set
        auto diffs = difference_set(b.support(), 6.0);
        for (double h : diffs.points()) {
            try {
                auto w = ac::nonzero_witness(b, h);
                if (!(std::abs(w.coefficient) > 0.0)) witnesses_ok = false;
            } catch (const std::exception&) {
                witnesses_ok = false;
            }
        }
        // vanishing on U, scanned only for the plain fixture where U is wide
        if (!modulated) {
            auto ss = difference_set(spectrum(alpha, 8.0), 4.0);
            double ref = 0.0;
            for (int l = 0; l <= 2 * k; ++l)
                for (double u = -1.25; u <= 1.25; u += 0.01)
                    ref = std::max(ref, std::abs(ac::A_coefficient(b, 1.0, l, u)));
            for (double u = -1.25; u <= 1.25; u += 0.013) {
                double dist = 1e9;
                for (double s : ss.points()) dist = std::min(dist, std::abs(u - s));
                if (dist <= r) continue;
                for (int l = 0; l <= 2 * k; ++l)
                    worst_vanish = std::max(
                        worst_vanish, std::abs(ac::A_coefficient(b, 1.0, l, u)) / ref);
            }
        }
    }
    const bool ok = worst_id < 1e-8 && worst_vanish < 1e-7 && witnesses_ok;
    c.report(ok, fmt("identity %.2e (tol 1e-8), U-vanishing %.2e (tol 1e-7), witnesses %s",
                     worst_id, worst_vanish, witnesses_ok ? "all" : "MISSING"));
}

void criterion_6_chi_exact() {
    Criterion c(6, "triangular polynomial inverse is exact");
    bool ok = true;
    for (int k = 0; k <= 6; ++k) {
        auto M = rc::leibniz_matrix(k);
        auto chi = rc::triangular_chi(k);
        if (!rc::is_identity(rc::poly_matrix_product(M, chi))) ok = false;
        if (!rc::is_identity(rc::poly_matrix_product(chi, M))) ok = false;
    }
    c.report(ok, "M(t) chi(t) = I for k = 0..6, exact rational arithmetic");
}

void criterion_7_confluent() {
    Criterion c(7, "confluent systems solve with small residuals");
    auto cm2 = rc::build_confluent({cplx{1, 0}, cplx{-1, 0}}, 0);
    bool ok = std::abs(cm2.M.determinant() - cplx{-2, 0}) < 1e-14;

    std::mt19937_64 rng(707);
    std::uniform_int_distribution<int> n_nodes(1, 4);
    std::uniform_int_distribution<int> pick_k(0, 3);
    std::uniform_real_distribution<double> angle(0.0, 1.0);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int N = n_nodes(rng);
        std::vector<cplx> nodes;
        int guard = 0;
        while (int(nodes.size()) < N && guard++ < 1000) {
            const cplx z = unit_phase(angle(rng));
            bool far = true;
            for (const auto& w : nodes)
                if (std::abs(z - w) < 0.1) far = false;
            if (far) nodes.push_back(z);
        }
        auto cm = rc::build_confluent(nodes, pick_k(rng));
        if (!(std::abs(cm.M.determinant()) > 0.0)) ok = false;
        Eigen::VectorXcd x_true(cm.M.cols());
        for (Eigen::Index i = 0; i < x_true.size(); ++i) x_true(i) = cplx{val(rng), val(rng)};
        try {
            auto sol = rc::solve_confluent(cm, cm.M * x_true);
            worst = std::max(worst, sol.residual_inf);
        } catch (const std::exception&) {
            ok = false;
        }
    }
    ok = ok && worst < 1e-8;
    c.report(ok, fmt("det(2x2) = -2 exact to 1e-14, worst residual %.2e (tol 1e-8)", worst));
}

void criterion_8_beta_consistency() {
    Criterion c(8, "translate-combination identity for beta");
    std::mt19937_64 rng(808);
    gen::DistributionSpec spec;
    spec.max_translates = 3;
    spec.max_order = 2;
    spec.max_degree = 2;
    spec.max_terms = 5;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        auto d = gen::random_distribution(rng, spec);
        std::vector<double> taus;
        for (const auto& term : d.terms) {
            const double v = term.tau.value();
            bool seen = false;
            for (double w : taus)
                if (std::abs(v - w) < 1e-9) seen = true;
            if (!seen) taus.push_back(v);
        }
        worst = std::max(worst, rc::beta_consistency(d, taus, 8.0).max_discrepancy);
    }
    const bool ok = worst < 1e-8;
    c.report(ok, fmt("20 random inputs, worst atomwise discrepancy %.2e (tol 1e-8)", worst));
}

void criterion_9_roundtrip() {
    Criterion c(9, "reconstruction round trip");
    std::mt19937_64 rng(909);
    double worst = 0.0;
    int structural_failures = 0;
    for (int t = 0; t < 50; ++t) {
        auto d = gen::random_distribution(rng);
        std::vector<double> taus;
        for (const auto& term : d.terms) {
            const double v = term.tau.value();
            bool seen = false;
            for (double w : taus)
                if (std::abs(v - w) < 1e-9) seen = true;
            if (!seen) taus.push_back(v);
        }
        bool ok_trial = true;
        try {
            auto td = rc::expand(d, taus, 64);
            auto rec = rc::reconstruct(td);
            if (rec.terms.size() != d.terms.size()) ok_trial = false;  // spurious/missing
            std::vector<bool> used(d.terms.size(), false);
            for (const auto& g : rec.terms) {
                bool matched = false;
                for (std::size_t i = 0; i < d.terms.size(); ++i) {
                    if (used[i]) continue;
                    const auto& w = d.terms[i];
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
                if (!matched) ok_trial = false;
            }
        } catch (const std::exception&) {
            ok_trial = false;
        }
        if (!ok_trial) ++structural_failures;
    }
    const bool ok = structural_failures == 0 && worst < 1e-6 && c.elapsed() < 120.0;
    c.report(ok, fmt("50 trials, %d structural failures, worst coefficient error %.2e "
                     "(tol 1e-6)",
                     structural_failures, worst));
}

void criterion_10_negative_control() {
    Criterion c(10, "non-admissible sequence is rejected");
    const long W = 64;
    rc::TranslateDecomposition td;
    td.taus = {0.0};
    td.order = 0;
    td.window = W;
    std::vector<cplx> seq;
    for (long lam = -W; lam <= W; ++lam)
        seq.push_back(cplx{1.0 / (1.0 + double(lam * lam)), 0.0});
    td.sequences[{0, 0}] = seq;
    bool rejected = false;
    bool silent_fit = false;
    try {
        auto d = rc::reconstruct(td);
        silent_fit = true;
    } catch (const rc::ModelOrderOverflow&) {
        rejected = true;
    } catch (const std::exception&) {
        // wrong error type counts as failure
    }
    c.report(rejected && !silent_fit,
             rejected ? "a(lam) = 1/(1+lam^2) raised model-order overflow"
                      : "sequence was not rejected with model-order overflow");
}

}  // namespace

int main() {
    std::printf("acceptance: crystalline distribution library\n");
    criterion_1_poisson_pairing();
    criterion_2_gap_density();
    criterion_3_carleman_cauchy();
    criterion_4_jensen();
    criterion_5_autocorrelation();
    criterion_6_chi_exact();
    criterion_7_confluent();
    criterion_8_beta_consistency();
    criterion_9_roundtrip();
    criterion_10_negative_control();
    std::printf("%d/%d criteria passed\n", 10 - failures, 10);
    return failures;
}
