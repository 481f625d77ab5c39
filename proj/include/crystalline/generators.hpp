#pragma once

#include <random>

#include "crystalline/model.hpp"
#include "crystalline/test_function.hpp"

namespace crystalline::gen {

struct DistributionSpec {
    int max_translates = 2;  // N
    int max_order = 2;       // k
    int max_degree = 2;      // l
    int max_terms = 6;
    bool exact_coords = false;  // rational tau/omega on a small grid
};

/// Random canonical distribution on the unit lattice: translates separated by
/// >= 0.1 mod 1, modulations separated by >= 0.05, coefficients with
/// magnitude in [0.5, 2]. Returned normalized.
CrystallineDistribution random_distribution(std::mt19937_64& rng,
                                            const DistributionSpec& spec = {});

/// Random Gaussian with center in [-3, 3], width in [0.5, 2],
/// modulation in [-3, 3].
TestFunction random_test_function(std::mt19937_64& rng);

}  // namespace crystalline::gen
