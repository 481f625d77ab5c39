#include "crystalline/generators.hpp"

#include <algorithm>
#include <cmath>

namespace crystalline::gen {

namespace {

double circular_distance(double a, double b) {
    double d = std::abs(a - b);
    d = std::fmod(d, 1.0);
    return std::min(d, 1.0 - d);
}

std::vector<double> separated_values(std::mt19937_64& rng, int count, double min_sep) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> vals;
    int guard = 0;
    while (int(vals.size()) < count && guard++ < 10000) {
        const double v = uni(rng);
        bool ok = true;
        for (double w : vals)
            if (circular_distance(v, w) < min_sep) ok = false;
        if (ok) vals.push_back(v);
    }
    return vals;
}

}  // namespace

CrystallineDistribution random_distribution(std::mt19937_64& rng,
                                            const DistributionSpec& spec) {
    std::uniform_int_distribution<int> n_taus(1, spec.max_translates);
    std::uniform_int_distribution<int> n_terms(1, spec.max_terms);
    std::uniform_int_distribution<int> pick_l(0, spec.max_degree);
    std::uniform_int_distribution<int> pick_p(0, spec.max_order);
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 1.0);
    std::uniform_int_distribution<int> grid(0, 15);

    const int N = n_taus(rng);
    std::vector<double> taus;
    std::vector<double> omegas;
    if (spec.exact_coords) {
        std::vector<int> used;
        while (int(taus.size()) < N) {
            const int g = grid(rng);
            if (std::find(used.begin(), used.end(), g) == used.end()) {
                used.push_back(g);
                taus.push_back(double(g) / 16.0);
            }
        }
        omegas = {0.0, 1.0 / 16, 3.0 / 16, 5.0 / 16, 9.0 / 16, 13.0 / 16};
    } else {
        taus = separated_values(rng, N, 0.1);
        omegas = separated_values(rng, 6, 0.05);
    }

    CrystallineDistribution d{Lattice(Coord(Rational(1))), {}};
    const int T = n_terms(rng);
    std::uniform_int_distribution<int> pick_tau(0, N - 1);
    std::uniform_int_distribution<int> pick_omega(0, int(omegas.size()) - 1);
    for (int t = 0; t < T; ++t) {
        CanonicalTerm term;
        if (spec.exact_coords) {
            term.tau = Coord(Rational(std::llround(taus[std::size_t(pick_tau(rng))] * 16), 16));
            term.omega =
                Coord(Rational(std::llround(omegas[std::size_t(pick_omega(rng))] * 16), 16));
        } else {
            term.tau = Coord::from_double(taus[std::size_t(pick_tau(rng))]);
            term.omega = Coord::from_double(omegas[std::size_t(pick_omega(rng))]);
        }
        term.l = pick_l(rng);
        term.p = pick_p(rng);
        const double m = mag(rng);
        term.c = m * unit_phase(phase(rng));
        d.terms.push_back(term);
    }
    CrystallineDistribution nd = normalize(d);
    if (nd.terms.empty()) {
        // Cancellation wiped everything (possible but rare); keep one term.
        d.terms.resize(1);
        nd = normalize(d);
    }
    return nd;
}

TestFunction random_test_function(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> center(-3.0, 3.0);
    std::uniform_real_distribution<double> width(0.5, 2.0);
    std::uniform_real_distribution<double> modulation(-3.0, 3.0);
    return TestFunction(center(rng), width(rng), modulation(rng));
}

}  // namespace crystalline::gen
