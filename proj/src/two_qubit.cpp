#include "erae/two_qubit.hpp"

#include <algorithm>
#include <cmath>

#include "erae/config.hpp"
#include "erae/error.hpp"

namespace erae {

TwoQubitState::TwoQubitState(DensityMatrix rho) : rho_(std::move(rho)) {
  if (rho_.dim_a() != 2 || rho_.dim_b() != 2)
    throw Error(ErrorCode::DimensionMismatch, "two-qubit state needs dimA = dimB = 2");
}

const ComplexMatrix& sigma_yy() {
  static const ComplexMatrix yy = [] {
    const ComplexMatrix y{{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}};
    return kron(y, y);
  }();
  return yy;
}

ComplexMatrix spin_flip(const TwoQubitState& state) {
  const ComplexMatrix& yy = sigma_yy();
  return yy * state.rho().matrix().conjugate() * yy;
}

double concurrence_pure(std::span<const cplx> psi) {
  if (psi.size() != 4) throw Error(ErrorCode::DimensionMismatch, "two-qubit pure state needs 4 amplitudes");
  double norm = 0.0;
  for (const cplx& z : psi) norm += std::norm(z);
  if (std::abs(norm - 1.0) > kTol.normalization)
    throw Error(ErrorCode::NotNormalized, "pure state is not unit norm");
  // psi~ = yy psi^*, so <psi~|psi> = psi^T yy psi.
  const StateVector yy_psi = sigma_yy() * psi;
  cplx overlap = 0.0;
  for (std::size_t i = 0; i < 4; ++i) overlap += psi[i] * yy_psi[i];
  return std::min(1.0, std::abs(overlap));
}

// Lambda_i are the singular values of tau = B^T yy B for any factor
// rho = B B^dagger; tau tau^dagger is unitarily similar to
// sqrt(rho) rho~ sqrt(rho). Taking them from the Hermitian dilation
// [[0, tau], [tau^dagger, 0]] keeps small Lambda_i accurate to roundoff
// rather than to the square root of it.
ConcurrenceResult concurrence_mixed(const TwoQubitState& state) {
  const HermitianSpectrum rs = hermitian_eig(state.rho().matrix());
  ComplexMatrix b(4, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    const double w = std::sqrt(std::max(rs.eigenvalues[j], 0.0));
    for (std::size_t i = 0; i < 4; ++i) b(i, j) = w * rs.eigenvectors(i, j);
  }
  const ComplexMatrix tau = b.transpose() * sigma_yy() * b;
  ComplexMatrix dil(8, 8);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      dil(i, 4 + j) = tau(i, j);
      dil(4 + j, i) = std::conj(tau(i, j));
    }
  std::vector<double> ev(8);
  hermitian_eigenvalues(dil.data(), 8, ev.data());
  ConcurrenceResult out{};
  for (std::size_t i = 0; i < 4; ++i) out.lambdas[i] = std::max(ev[i], 0.0);
  const auto& l = out.lambdas;
  out.concurrence = std::max(l[0] - l[1] - l[2] - l[3], 0.0);
  return out;
}

double erae_closed_form(const TwoQubitState& state, Alpha alpha) {
  const bool below = alpha.mode() == AlphaMode::ZeroLimit ||
                     (alpha.mode() == AlphaMode::Generic && alpha.value() < alpha_critical());
  if (below)
    throw Error(ErrorCode::AlphaBelowCritical,
                "no concurrence closed form below alpha_c; use the roof minimizer");
  return omega(std::min(1.0, concurrence_mixed(state).concurrence), alpha);
}

}  // namespace erae
