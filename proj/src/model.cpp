#include "crystalline/model.hpp"

#include <algorithm>
#include <cmath>

namespace crystalline {

bool same_term_key(const CanonicalTerm& a, const CanonicalTerm& b) {
    return a.l == b.l && a.p == b.p && a.tau == b.tau && a.omega == b.omega;
}

CrystallineDistribution normalize(const CrystallineDistribution& d, double eps_rel) {
    const Coord modulus = d.lattice.step.reciprocal();
    std::vector<CanonicalTerm> work = d.terms;
    for (auto& t : work) t.omega = t.omega.mod(modulus);

    std::sort(work.begin(), work.end(), [](const CanonicalTerm& a, const CanonicalTerm& b) {
        if (a.l != b.l) return a.l < b.l;
        if (a.p != b.p) return a.p < b.p;
        if (!(a.tau == b.tau)) return a.tau < b.tau;
        if (!(a.omega == b.omega)) return a.omega < b.omega;
        return false;
    });

    std::vector<CanonicalTerm> merged;
    for (const auto& t : work) {
        if (!merged.empty() && same_term_key(merged.back(), t))
            merged.back().c += t.c;
        else
            merged.push_back(t);
    }

    double maxmag = 0.0;
    for (const auto& t : merged) maxmag = std::max(maxmag, std::abs(t.c));
    std::vector<CanonicalTerm> kept;
    for (const auto& t : merged)
        if (std::abs(t.c) > eps_rel * maxmag && t.c != cplx{0.0, 0.0}) kept.push_back(t);

    return CrystallineDistribution{d.lattice, std::move(kept)};
}

CrystallineDistribution reflect(const CrystallineDistribution& d) {
    CrystallineDistribution out{d.lattice, {}};
    out.terms.reserve(d.terms.size());
    for (const auto& t : d.terms)
        out.terms.push_back({-t.tau, -t.omega, t.l, t.p, double(parity_sign(t.l + t.p)) * t.c});
    return normalize(out);
}

CrystallineDistribution reduce_translates(const CrystallineDistribution& d) {
    const Coord a = d.lattice.step;
    CrystallineDistribution out{d.lattice, {}};
    for (const auto& t : d.terms) {
        const Coord tau0 = t.tau.mod(a);
        const Coord delta_c = (t.tau - tau0) * a.reciprocal();
        const long delta = std::lround(delta_c.value());
        if (delta == 0) {
            out.terms.push_back(t);
            continue;
        }
        // lam + tau = (lam + delta a) + tau0; re-expand the weight around the
        // shifted index lam' = lam + delta a.
        const double shift = double(delta) * a.value();
        const cplx base = t.c * unit_phase(-shift * t.omega.value());
        for (int i = 0; i <= t.l; ++i) {
            const cplx c = base * binomial(t.l, i) * dpow_int(-shift, t.l - i);
            out.terms.push_back({tau0, t.omega, i, t.p, c});
        }
    }
    return normalize(out);
}

CrystallineDistribution to_unit_lattice(const CrystallineDistribution& d) {
    const Coord a = d.lattice.step;
    const double av = a.value();
    CrystallineDistribution out{Lattice(Coord(Rational(1))), {}};
    out.terms.reserve(d.terms.size());
    for (const auto& t : d.terms) {
        // alpha(phi(./a)): atoms move to (lam+tau)/a, weights pick up a^l, deltas a^{-p}.
        const double scale = dpow_int(av, t.l) / dpow_int(av, t.p);
        out.terms.push_back({t.tau * a.reciprocal(), t.omega * a, t.l, t.p, scale * t.c});
    }
    return out;
}

CrystallineDistribution from_unit_lattice(const CrystallineDistribution& d, Coord step) {
    const double av = step.value();
    CrystallineDistribution out{Lattice(step), {}};
    out.terms.reserve(d.terms.size());
    for (const auto& t : d.terms) {
        const double scale = dpow_int(av, t.p) / dpow_int(av, t.l);
        out.terms.push_back({t.tau * step, t.omega * step.reciprocal(), t.l, t.p, scale * t.c});
    }
    return out;
}

int distribution_order(const CrystallineDistribution& d) {
    int k = 0;
    for (const auto& t : d.terms) k = std::max(k, t.p);
    return k;
}

}  // namespace crystalline
