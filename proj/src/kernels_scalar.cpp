#include "erae/kernels.hpp"

namespace erae::kernels {
namespace {

// Explicit real arithmetic: std::complex operator* goes through the
// Annex G NaN-recovery path, which is both slow and not what the SIMD
// variant computes.
inline void cmul_acc(double ar, double ai, double br, double bi, double& cr, double& ci) {
  cr += ar * br - ai * bi;
  ci += ar * bi + ai * br;
}

void zgemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      const cplx* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) {
        double cr = crow[j].real();
        double ci = crow[j].imag();
        cmul_acc(ar, ai, brow[j].real(), brow[j].imag(), cr, ci);
        crow[j] = {cr, ci};
      }
    }
  }
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    const double yr = y[i].real();
    const double yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

void gram(const cplx* psi, std::size_t rows, std::size_t cols, cplx* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = i; j < rows; ++j) {
      // out_ij = sum_k psi_ik conj(psi_jk)
      const cplx v = dotc(psi + j * cols, psi + i * cols, cols);
      out[i * rows + j] = v;
      out[j * rows + i] = std::conj(v);
    }
    out[i * rows + i] = {out[i * rows + i].real(), 0.0};
  }
}

void mix2(cplx* x, cplx* y, std::size_t n, cplx u00, cplx u01, cplx u10, cplx u11) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    const double yr = y[i].real();
    const double yi = y[i].imag();
    double nxr = 0.0, nxi = 0.0, nyr = 0.0, nyi = 0.0;
    cmul_acc(u00.real(), u00.imag(), xr, xi, nxr, nxi);
    cmul_acc(u01.real(), u01.imag(), yr, yi, nxr, nxi);
    cmul_acc(u10.real(), u10.imag(), xr, xi, nyr, nyi);
    cmul_acc(u11.real(), u11.imag(), yr, yi, nyr, nyi);
    x[i] = {nxr, nxi};
    y[i] = {nyr, nyi};
  }
}

double norm_sq(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar", &zgemm, &gram, &mix2, &dotc, &norm_sq};
  return table;
}

}  // namespace erae::kernels
