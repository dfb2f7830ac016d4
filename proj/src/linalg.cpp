#include "erae/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "erae/config.hpp"
#include "erae/error.hpp"
#include "erae/kernels.hpp"

namespace erae {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw Error(ErrorCode::DimensionMismatch, "entry count does not match rows x cols");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> v) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix r = *this;
  for (auto& z : r.data_) z = std::conj(z);
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_)
    throw Error(ErrorCode::DimensionMismatch, "matrix sum shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_)
    throw Error(ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  kernels::active().zgemm(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

StateVector operator*(const ComplexMatrix& m, std::span<const cplx> v) {
  if (m.cols() != v.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
  StateVector out(m.rows());
  kernels::active().zgemm(m.data(), v.data(), out.data(), m.rows(), m.cols(), 1);
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "comparison shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  return worst;
}

double hermitian_defect(const ComplexMatrix& m) {
  if (!m.square()) throw Error(ErrorCode::NotSquare, "hermitian check on non-square matrix");
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t rb = b.rows();
  const std::size_t cb = b.cols();
  ComplexMatrix r(a.rows() * rb, a.cols() * cb);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx s = a(i, j);
      if (s == cplx{}) continue;
      for (std::size_t k = 0; k < rb; ++k)
        for (std::size_t l = 0; l < cb; ++l) r(i * rb + k, j * cb + l) = s * b(k, l);
    }
  return r;
}

namespace {

double off_diagonal_norm(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += std::norm(a[i * n + j]);
  return std::sqrt(s);
}

// Cyclic complex Jacobi on a (n x n, row-major, Hermitian), overwritten by
// a near-diagonal matrix. When v is non-null it accumulates the rotations so
// that input = v diag(a) v^dagger.
void jacobi(cplx* a, std::size_t n, std::vector<cplx>* v) {
  if (v != nullptr) {
    v->assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) (*v)[i * n + i] = 1.0;
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < n * n; ++i) scale += std::norm(a[i]);
  scale = std::sqrt(scale);
  if (scale == 0.0) return;

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a, n) <= 1e-17 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a[p * n + q];
        const double b = std::abs(apq);
        if (b <= 1e-300 || b <= 1e-18 * scale) continue;
        const cplx phase = apq / b;  // a_pq = b * phase
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double theta = (aqq - app) / (2.0 * b);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // U acts on columns (p, q): U = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const cplx upp = c;
        const cplx upq = s;
        const cplx uqp = -s * std::conj(phase);
        const cplx uqq = c * std::conj(phase);
        // A <- A U
        for (std::size_t r = 0; r < n; ++r) {
          const cplx arp = a[r * n + p];
          const cplx arq = a[r * n + q];
          a[r * n + p] = arp * upp + arq * uqp;
          a[r * n + q] = arp * upq + arq * uqq;
        }
        // A <- U^dagger A
        for (std::size_t col = 0; col < n; ++col) {
          const cplx apc = a[p * n + col];
          const cplx aqc = a[q * n + col];
          a[p * n + col] = std::conj(upp) * apc + std::conj(uqp) * aqc;
          a[q * n + col] = std::conj(upq) * apc + std::conj(uqq) * aqc;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        a[p * n + p] = a[p * n + p].real();
        a[q * n + q] = a[q * n + q].real();
        if (v != nullptr) {
          auto& vm = *v;
          for (std::size_t r = 0; r < n; ++r) {
            const cplx vrp = vm[r * n + p];
            const cplx vrq = vm[r * n + q];
            vm[r * n + p] = vrp * upp + vrq * uqp;
            vm[r * n + q] = vrp * upq + vrq * uqq;
          }
        }
      }
    }
  }
}

}  // namespace

HermitianSpectrum hermitian_eig(const ComplexMatrix& m) {
  if (!m.square()) throw Error(ErrorCode::NotSquare, "hermitian_eig needs a square matrix");
  if (!m.all_finite()) throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");
  if (hermitian_defect(m) > kTol.hermitian_eig)
    throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian within tolerance");
  const std::size_t n = m.rows();
  std::vector<cplx> a(m.entries().begin(), m.entries().end());
  // Symmetrize so roundoff-level asymmetry does not leak into the rotations.
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = a[i * n + i].real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (a[i * n + j] + std::conj(a[j * n + i]));
      a[i * n + j] = avg;
      a[j * n + i] = std::conj(avg);
    }
  }
  std::vector<cplx> v;
  jacobi(a.data(), n, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x].real() > a[y * n + y].real();
  });
  HermitianSpectrum out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a[order[k] * n + order[k]].real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v[r * n + order[k]];
  }
  return out;
}

void hermitian_eigenvalues(const cplx* a, std::size_t n, double* out) {
  if (n == 1) {
    out[0] = a[0].real();
    return;
  }
  if (n == 2) {
    const double p = a[0].real();
    const double q = a[3].real();
    const double mid = 0.5 * (p + q);
    const double half = 0.5 * (p - q);
    const double r = std::sqrt(half * half + std::norm(a[1]));
    out[0] = mid + r;
    // mid - r loses everything when the matrix is nearly rank one; use the
    // determinant instead.
    const double det = p * q - std::norm(a[1]);
    out[1] = out[0] > 0.0 ? det / out[0] : mid - r;
    return;
  }
  std::array<cplx, kMaxLocalDim * kMaxLocalDim> small;
  std::vector<cplx> big;
  cplx* work = small.data();
  if (n > kMaxLocalDim) {
    big.resize(n * n);
    work = big.data();
  }
  std::copy(a, a + n * n, work);
  jacobi(work, n, nullptr);
  for (std::size_t i = 0; i < n; ++i) out[i] = work[i * n + i].real();
  std::sort(out, out + n, std::greater<>());
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const HermitianSpectrum spec = hermitian_eig(m);
  const std::size_t n = m.rows();
  std::vector<double> roots(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ev = spec.eigenvalues[i];
    if (ev < -kTol.psd_reject) throw Error(ErrorCode::NotPSD, "negative eigenvalue below -1e-6");
    roots[i] = ev > 0.0 ? std::sqrt(ev) : 0.0;
  }
  const ComplexMatrix& q = spec.eigenvectors;
  ComplexMatrix scaled = q;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) scaled(r, c) *= roots[c];
  ComplexMatrix out = scaled * q.adjoint();
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = out(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (out(i, j) + std::conj(out(j, i)));
      out(i, j) = avg;
      out(j, i) = std::conj(avg);
    }
  }
  return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, std::size_t dim_a, std::size_t dim_b)
    : m_(std::move(m)), dim_a_(dim_a), dim_b_(dim_b) {
  if (!m_.square()) throw Error(ErrorCode::NotSquare, "density matrix must be square");
  if (dim_a == 0 || dim_b == 0 || dim_a * dim_b != m_.rows())
    throw Error(ErrorCode::DimensionMismatch, "dimA * dimB must equal the matrix size");
  if (!m_.all_finite()) throw Error(ErrorCode::InvalidState, "non-finite entries");
  if (hermitian_defect(m_) > kTol.hermitian)
    throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
  if (std::abs(m_.trace() - 1.0) > kTol.trace)
    throw Error(ErrorCode::InvalidState, "density matrix trace differs from 1");
  std::vector<double> ev(m_.rows());
  hermitian_eigenvalues(m_.data(), m_.rows(), ev.data());
  if (ev.back() < -kTol.psd_clamp) throw Error(ErrorCode::NotPSD, "density matrix is not PSD");
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> psi, std::size_t dim_a, std::size_t dim_b) {
  if (psi.size() != dim_a * dim_b)
    throw Error(ErrorCode::DimensionMismatch, "state length must equal dimA * dimB");
  const double n2 = kernels::active().norm_sq(psi.data(), psi.size());
  if (std::abs(n2 - 1.0) > kTol.normalization)
    throw Error(ErrorCode::NotNormalized, "pure state is not unit norm");
  return DensityMatrix(ComplexMatrix::outer(psi), dim_a, dim_b);
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep) {
  if (!m.square() || dim_a * dim_b != m.rows())
    throw Error(ErrorCode::DimensionMismatch, "partial trace dims do not match matrix");
  if (keep == Subsystem::A) {
    ComplexMatrix r(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < dim_b; ++k) s += m(i * dim_b + k, j * dim_b + k);
        r(i, j) = s;
      }
    return r;
  }
  ComplexMatrix r(dim_b, dim_b);
  for (std::size_t k = 0; k < dim_b; ++k)
    for (std::size_t l = 0; l < dim_b; ++l) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < dim_a; ++i) s += m(i * dim_b + k, i * dim_b + l);
      r(k, l) = s;
    }
  return r;
}

ComplexMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  return partial_trace(rho.matrix(), rho.dim_a(), rho.dim_b(), keep);
}

void schmidt_coefficients_into(const cplx* psi, std::size_t dim_a, std::size_t dim_b, cplx* work,
                               double* out) {
  const auto& k = kernels::active();
  if (dim_a <= dim_b) {
    k.gram(psi, dim_a, dim_b, work);
    hermitian_eigenvalues(work, dim_a, out);
    return;
  }
  // Psi^T Psi^* has the spectrum of rho_B.
  cplx* t = work + dim_b * dim_b;
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t j = 0; j < dim_b; ++j) t[j * dim_a + i] = psi[i * dim_b + j];
  k.gram(t, dim_b, dim_a, work);
  hermitian_eigenvalues(work, dim_b, out);
}

std::vector<double> schmidt_coefficients(std::span<const cplx> psi, std::size_t dim_a,
                                         std::size_t dim_b) {
  if (psi.size() != dim_a * dim_b)
    throw Error(ErrorCode::DimensionMismatch, "state length must equal dimA * dimB");
  const std::size_t r = std::min(dim_a, dim_b);
  std::vector<cplx> work(dim_a * dim_b + r * r);
  std::vector<double> out(r);
  schmidt_coefficients_into(psi.data(), dim_a, dim_b, work.data(), out.data());
  for (auto& x : out) x = std::max(x, 0.0);
  return out;
}

}  // namespace erae
