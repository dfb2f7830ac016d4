#pragma once

// Wootters concurrence and the concurrence-based closed form of the
// entanglement Renyi entropy for two-qubit states.

#include <array>
#include <span>

#include "erae/linalg.hpp"
#include "erae/pure_entropy.hpp"

namespace erae {

class TwoQubitState {
 public:
  /// Throws DimensionMismatch unless rho is 2 x 2.
  explicit TwoQubitState(DensityMatrix rho);

  const DensityMatrix& rho() const noexcept { return rho_; }

 private:
  DensityMatrix rho_;
};

/// sigma_y (x) sigma_y
const ComplexMatrix& sigma_yy();

/// (sigma_y (x) sigma_y) rho^* (sigma_y (x) sigma_y), conjugation in the
/// computational basis.
ComplexMatrix spin_flip(const TwoQubitState& state);

/// |<psi~|psi>| for a unit 4-vector; NotNormalized otherwise.
double concurrence_pure(std::span<const cplx> psi);

struct ConcurrenceResult {
  double concurrence;
  std::array<double, 4> lambdas;  // descending
};

/// Lambda_i^2 from the Hermitian matrix sqrt(rho) rho~ sqrt(rho).
ConcurrenceResult concurrence_mixed(const TwoQubitState& state);

/// Omega(C(rho), alpha). Throws AlphaBelowCritical for alpha < alpha_c
/// (including the alpha -> 0 limit).
double erae_closed_form(const TwoQubitState& state, Alpha alpha);

}  // namespace erae
