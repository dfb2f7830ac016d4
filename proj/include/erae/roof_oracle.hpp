#pragma once

// Numerical convex-roof minimizer. Searches over pure-state decompositions
// of a density matrix and returns the smallest average pure-state entropy
// it finds: always an upper bound on the roof, an estimate at convergence.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "erae/linalg.hpp"
#include "erae/pure_entropy.hpp"

namespace erae {

struct EnsembleDecomposition {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::vector<double> weights;
  std::vector<StateVector> states;  // unit norm
};

struct OracleConfig {
  std::size_t ensemble_size = 0;  // 0 selects rank^2
  std::size_t restarts = 32;
  std::size_t max_iters = 2000;   // sweeps over all member pairs
  double conv_tol = 1e-8;
  std::uint64_t seed = 0;
};

struct OracleResult {
  double value = 0.0;
  EnsembleDecomposition best;
  bool converged = false;
  double spread = 0.0;  // max - min over restarts
};

/// Members phi_k = sum_i V_ki sqrt(lambda_i) e_i over the eigendecomposition
/// of rho. V must have orthonormal columns (V^dagger V = I within 1e-10)
/// and as many columns as rho has nonzero eigenvalues.
/// Throws NotIsometry, RankMismatch.
EnsembleDecomposition ensemble_from_isometry(const DensityMatrix& rho, const ComplexMatrix& v);

/// sum_k p_k R_alpha(psi_k).
double roof_value_of(const EnsembleDecomposition& ensemble, Alpha alpha);

/// sum_k p_k |psi_k><psi_k|.
ComplexMatrix reconstruct(const EnsembleDecomposition& ensemble);

/// Throws DimensionTooLarge beyond 9 per side.
OracleResult minimize_roof(const DensityMatrix& rho, Alpha alpha, const OracleConfig& cfg = {});

}  // namespace erae
