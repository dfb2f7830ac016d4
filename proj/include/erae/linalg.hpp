#pragma once

// Small dense complex linear algebra: just enough for d^2 x d^2 density
// matrices with d <= 16.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace erae {

using cplx = std::complex<double>;
using StateVector = std::vector<cplx>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  /// Row-major entries; throws DimensionMismatch on a size mismatch.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> diag);
  /// |v><v|
  static ComplexMatrix outer(std::span<const cplx> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> entries() const noexcept { return data_; }
  std::span<cplx> entries() noexcept { return data_; }
  const cplx* data() const noexcept { return data_.data(); }
  cplx* data() noexcept { return data_.data(); }

  ComplexMatrix adjoint() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix transpose() const;
  cplx trace() const;
  bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

StateVector operator*(const ComplexMatrix& m, std::span<const cplx> v);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
/// Largest entrywise modulus of m - m^dagger.
double hermitian_defect(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct HermitianSpectrum {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // column i pairs with eigenvalues[i]
};

/// Cyclic complex Jacobi. Throws NotSquare / NotHermitian.
HermitianSpectrum hermitian_eig(const ComplexMatrix& m);

/// Eigenvalues only, descending, of the n x n Hermitian matrix at `a`
/// (row-major). No validation; used on hot paths with trusted input.
void hermitian_eigenvalues(const cplx* a, std::size_t n, double* out);

/// Principal square root of a PSD matrix; eigenvalues in [-psd_clamp, 0)
/// are clamped, below -psd_reject throws NotPSD.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

enum class Subsystem { A, B };

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace, PSD and dims. Throws InvalidState,
  /// DimensionMismatch or NotPSD.
  DensityMatrix(ComplexMatrix m, std::size_t dim_a, std::size_t dim_b);

  /// |psi><psi| for a unit vector (NotNormalized otherwise).
  static DensityMatrix pure(std::span<const cplx> psi, std::size_t dim_a, std::size_t dim_b);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  std::size_t dim() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
  std::size_t dim_a_;
  std::size_t dim_b_;
};

/// Reduced matrix of `keep` for any square matrix on C^{dA} (x) C^{dB}.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep);
ComplexMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

/// Schmidt coefficients (squared), descending, of a unit bipartite vector.
/// Length is min(dA, dB).
std::vector<double> schmidt_coefficients(std::span<const cplx> psi, std::size_t dim_a,
                                         std::size_t dim_b);

/// Same, into caller-provided scratch: `work` must hold dA*dB + min(dA,dB)^2
/// entries and `out` min(dA,dB).
void schmidt_coefficients_into(const cplx* psi, std::size_t dim_a, std::size_t dim_b, cplx* work,
                               double* out);

}  // namespace erae
