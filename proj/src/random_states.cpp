#include "erae/random_states.hpp"

#include <cmath>

#include "erae/error.hpp"

namespace erae {

namespace {

cplx gaussian(std::normal_distribution<double>& g, std::mt19937_64& rng) {
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

}  // namespace

StateVector random_pure_state(std::size_t dim, std::mt19937_64& rng) {
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "state dimension must be positive");
  std::normal_distribution<double> g;
  StateVector psi(dim);
  double norm = 0.0;
  for (cplx& z : psi) {
    z = gaussian(g, rng);
    norm += std::norm(z);
  }
  const double inv = 1.0 / std::sqrt(norm);
  for (cplx& z : psi) z *= inv;
  return psi;
}

DensityMatrix random_density(std::size_t dim_a, std::size_t dim_b, std::size_t rank, std::mt19937_64& rng) {
  const std::size_t n = dim_a * dim_b;
  if (rank == 0 || rank > n) throw Error(ErrorCode::RankMismatch, "rank must be in [1, dA*dB]");
  std::normal_distribution<double> g;
  ComplexMatrix gm(n, rank);
  for (cplx& z : gm.entries()) z = gaussian(g, rng);
  ComplexMatrix m = gm * gm.adjoint();
  const double tr = m.trace().real();
  m *= cplx(1.0 / tr);
  // Exact Hermitian symmetry; the product is only Hermitian to roundoff.
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = m(i, i).real();
    for (std::size_t j = 0; j < i; ++j) m(i, j) = std::conj(m(j, i));
  }
  return DensityMatrix(std::move(m), dim_a, dim_b);
}

}  // namespace erae
