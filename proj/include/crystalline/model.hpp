#pragma once

#include <optional>
#include <vector>

#include "crystalline/common.hpp"
#include "crystalline/coord.hpp"

namespace crystalline {

/// One-dimensional lattice a*Z, a > 0.
struct Lattice {
    Coord step;

    explicit Lattice(Coord s = Coord(Rational(1))) : step(s) {
        if (step.value() <= 0) throw std::invalid_argument("Lattice: step must be positive");
    }
    Lattice dual() const { return Lattice(step.reciprocal()); }
};

/// One canonical family  c * sum_{lam in aZ} lam^l e^{2 pi i lam omega} delta^{(p)}_{lam+tau}.
struct CanonicalTerm {
    Coord tau;
    Coord omega;
    int l = 0;
    int p = 0;
    cplx c{0.0, 0.0};
};

/// Finite list of canonical terms over one lattice. Operations that state
/// "pre: d normalized" expect normalize() output: omega reduced into
/// [0, 1/a), keys pairwise distinct, coefficients nonzero.
struct CrystallineDistribution {
    Lattice lattice;
    std::vector<CanonicalTerm> terms;
};

/// Reduce omega mod 1/a, merge duplicate (tau, omega, l, p) keys, drop
/// coefficients below eps_rel relative to the largest magnitude.
CrystallineDistribution normalize(const CrystallineDistribution& d, double eps_rel = 1e-12);

/// The x -> -x pushforward: term map (tau,omega,l,p,c) -> (-tau,-omega,l,p,(-1)^{l+p} c),
/// then normalized.
CrystallineDistribution reflect(const CrystallineDistribution& d);

/// Canonicalize every tau into [0, a) by re-indexing the lattice sum (the
/// monomial weight picks up a binomial expansion). normalize() deliberately
/// preserves the user's tau; this is the stronger normal form under which
/// the double-transform/reflection identity is exact term by term.
CrystallineDistribution reduce_translates(const CrystallineDistribution& d);

/// Exact dilation pair moving a distribution between its own lattice and the
/// unit lattice (reconstruction always runs on Z). to_unit_lattice uses the
/// pushforward alpha(phi(./a)); from_unit_lattice inverts it term by term.
CrystallineDistribution to_unit_lattice(const CrystallineDistribution& d);
CrystallineDistribution from_unit_lattice(const CrystallineDistribution& d, Coord step);

/// Max derivative order across terms (0 for an empty list).
int distribution_order(const CrystallineDistribution& d);

bool same_term_key(const CanonicalTerm& a, const CanonicalTerm& b);

}  // namespace crystalline
