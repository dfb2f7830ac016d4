#pragma once

// Seeded random states for property checks and the verify suites.

#include <cstddef>
#include <random>

#include "erae/linalg.hpp"

namespace erae {

/// Haar-random unit vector in C^dim.
StateVector random_pure_state(std::size_t dim, std::mt19937_64& rng);

/// G G^dagger / tr with G a dA*dB x rank complex Gaussian matrix
/// (Hilbert-Schmidt measure when rank = dA*dB).
DensityMatrix random_density(std::size_t dim_a, std::size_t dim_b, std::size_t rank, std::mt19937_64& rng);

}  // namespace erae
