#pragma once

#include "crystalline/comb.hpp"
#include "crystalline/model.hpp"
#include "crystalline/point_set.hpp"
#include "crystalline/test_function.hpp"

namespace crystalline {

/// d(phi) = sum_terms c sum_{lam in aZ} lam^l e^{2 pi i lam omega} (-1)^p phi^{(p)}(lam+tau).
/// The lattice sum is truncated once a certified Gaussian-tail bound drops
/// below tail_tol.
cplx action(const CrystallineDistribution& d, const TestFunction& phi, double tail_tol = 1e-12);

/// Closed-form transform of the canonical family onto the dual lattice:
/// shifts become modulations, modulations become shifts, derivative orders
/// become monomial factors and monomials become dual derivatives (with the
/// binomial re-expansion of the smooth factor around each dual atom).
/// Satisfies action(ft(d), phi) = action(d, ft(phi)). Expects d normalized.
CrystallineDistribution fourier_transform(const CrystallineDistribution& d);

/// Points lam+tau inside the window where the merged local distribution is
/// nonzero (a lam^l or e^{2 pi i lam omega} weight can kill an atom).
PointSet support(const CrystallineDistribution& d, double window_radius);

/// support(fourier_transform(d), window).
PointSet spectrum(const CrystallineDistribution& d, double window_radius);

}  // namespace crystalline
