#pragma once

// Dense complex inner loops used by linalg and the roof minimizer.
//
// Every kernel has a portable scalar reference implementation. On x86-64
// hosts with AVX2+FMA an intrinsic variant is selected at first use; set
// ERAE_KERNELS=scalar in the environment to force the reference path.
// All matrices are row-major and contiguous.

#include <complex>
#include <cstddef>
#include <string_view>

namespace erae::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;
  /// c (m x n) = a (m x k) * b (k x n)
  void (*zgemm)(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                std::size_t n);
  /// out (rows x rows) = psi * psi^dagger, psi is rows x cols
  void (*gram)(const cplx* psi, std::size_t rows, std::size_t cols, cplx* out);
  /// (x, y) <- (u00 x + u01 y, u10 x + u11 y), elementwise over n entries
  void (*mix2)(cplx* x, cplx* y, std::size_t n, cplx u00, cplx u01, cplx u10, cplx u11);
  /// sum_i conj(x_i) y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  /// sum_i |x_i|^2
  double (*norm_sq)(const cplx* x, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// AVX2 table, or nullptr when the build or the host lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;

/// Table chosen at startup (best available unless overridden by env).
const KernelTable& active() noexcept;

}  // namespace erae::kernels
