// AVX2+FMA variants of the complex kernels. This translation unit is built
// with -mavx2 -mfma, so it must not odr-use any inline function shared with
// the rest of the program: it sees complex numbers only as interleaved
// (re, im) double pairs and exports plain functions.

#include <cstddef>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace erae::kernels::avx2 {
namespace {

// [a.re, a.im, b.re, b.im] -> [a.im, a.re, b.im, b.re]
inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// v * w for two packed complex values v and a broadcast complex w.
inline __m256d cmul(__m256d v, __m256d wr, __m256d wi) {
  return _mm256_fmaddsub_pd(v, wr, _mm256_mul_pd(swap_pairs(v), wi));
}

inline double hsum_even(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return t[0] + t[2];
}

inline double hsum_odd(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return t[1] + t[3];
}

}  // namespace

// sum conj(x) y over n complex entries; result written to out[0..1]
void dotc(const double* x, const double* y, std::size_t n, double* out) {
  __m256d p = _mm256_setzero_pd();  // x.re*y.re, x.im*y.im
  __m256d q = _mm256_setzero_pd();  // x.re*y.im, x.im*y.re
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(x + 2 * i);
    const __m256d yv = _mm256_loadu_pd(y + 2 * i);
    p = _mm256_fmadd_pd(xv, yv, p);
    q = _mm256_fmadd_pd(xv, swap_pairs(yv), q);
  }
  double re = hsum_even(p) + hsum_odd(p);
  double im = hsum_even(q) - hsum_odd(q);
  for (; i < n; ++i) {
    const double xr = x[2 * i], xi = x[2 * i + 1];
    const double yr = y[2 * i], yi = y[2 * i + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  out[0] = re;
  out[1] = im;
}

double norm_sq(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(x + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum_even(acc) + hsum_odd(acc);
  for (; i < n; ++i) s += x[2 * i] * x[2 * i] + x[2 * i + 1] * x[2 * i + 1];
  return s;
}

void zgemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
           std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + 2 * i * n;
    for (std::size_t j = 0; j < 2 * n; ++j) crow[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[2 * (i * k + p)];
      const double ai = a[2 * (i * k + p) + 1];
      const __m256d wr = _mm256_set1_pd(ar);
      const __m256d wi = _mm256_set1_pd(ai);
      const double* brow = b + 2 * p * n;
      std::size_t j = 0;
      for (; j + 2 <= n; j += 2) {
        const __m256d bv = _mm256_loadu_pd(brow + 2 * j);
        const __m256d cv = _mm256_loadu_pd(crow + 2 * j);
        _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(cv, cmul(bv, wr, wi)));
      }
      for (; j < n; ++j) {
        const double br = brow[2 * j], bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void gram(const double* psi, std::size_t rows, std::size_t cols, double* out) {
  double v[2];
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = i; j < rows; ++j) {
      dotc(psi + 2 * j * cols, psi + 2 * i * cols, cols, v);
      out[2 * (i * rows + j)] = v[0];
      out[2 * (i * rows + j) + 1] = v[1];
      out[2 * (j * rows + i)] = v[0];
      out[2 * (j * rows + i) + 1] = -v[1];
    }
    out[2 * (i * rows + i) + 1] = 0.0;
  }
}

// u holds u00, u01, u10, u11 as interleaved pairs
void mix2(double* x, double* y, std::size_t n, const double* u) {
  const __m256d u00r = _mm256_set1_pd(u[0]), u00i = _mm256_set1_pd(u[1]);
  const __m256d u01r = _mm256_set1_pd(u[2]), u01i = _mm256_set1_pd(u[3]);
  const __m256d u10r = _mm256_set1_pd(u[4]), u10i = _mm256_set1_pd(u[5]);
  const __m256d u11r = _mm256_set1_pd(u[6]), u11i = _mm256_set1_pd(u[7]);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(x + 2 * i);
    const __m256d yv = _mm256_loadu_pd(y + 2 * i);
    const __m256d nx = _mm256_add_pd(cmul(xv, u00r, u00i), cmul(yv, u01r, u01i));
    const __m256d ny = _mm256_add_pd(cmul(xv, u10r, u10i), cmul(yv, u11r, u11i));
    _mm256_storeu_pd(x + 2 * i, nx);
    _mm256_storeu_pd(y + 2 * i, ny);
  }
  for (; i < n; ++i) {
    const double xr = x[2 * i], xi = x[2 * i + 1];
    const double yr = y[2 * i], yi = y[2 * i + 1];
    x[2 * i] = u[0] * xr - u[1] * xi + u[2] * yr - u[3] * yi;
    x[2 * i + 1] = u[0] * xi + u[1] * xr + u[2] * yi + u[3] * yr;
    y[2 * i] = u[4] * xr - u[5] * xi + u[6] * yr - u[7] * yi;
    y[2 * i + 1] = u[4] * xi + u[5] * xr + u[6] * yi + u[7] * yr;
  }
}

bool compiled() { return true; }

}  // namespace erae::kernels::avx2

#else

namespace erae::kernels::avx2 {
void dotc(const double*, const double*, std::size_t, double*) {}
double norm_sq(const double*, std::size_t) { return 0.0; }
void zgemm(const double*, const double*, double*, std::size_t, std::size_t, std::size_t) {}
void gram(const double*, std::size_t, std::size_t, double*) {}
void mix2(double*, double*, std::size_t, const double*) {}
bool compiled() { return false; }
}  // namespace erae::kernels::avx2

#endif
