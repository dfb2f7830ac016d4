#include <cstdlib>
#include <string_view>

#include "erae/kernels.hpp"

namespace erae::kernels {

namespace avx2 {
void dotc(const double* x, const double* y, std::size_t n, double* out);
double norm_sq(const double* x, std::size_t n);
void zgemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
           std::size_t n);
void gram(const double* psi, std::size_t rows, std::size_t cols, double* out);
void mix2(double* x, double* y, std::size_t n, const double* u);
bool compiled();
}  // namespace avx2

namespace {

const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

bool host_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable kAvx2{
    "avx2",
    [](const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n) {
      avx2::zgemm(raw(a), raw(b), raw(c), m, k, n);
    },
    [](const cplx* psi, std::size_t rows, std::size_t cols, cplx* out) {
      avx2::gram(raw(psi), rows, cols, raw(out));
    },
    [](cplx* x, cplx* y, std::size_t n, cplx u00, cplx u01, cplx u10, cplx u11) {
      const double u[8] = {u00.real(), u00.imag(), u01.real(), u01.imag(),
                           u10.real(), u10.imag(), u11.real(), u11.imag()};
      avx2::mix2(raw(x), raw(y), n, u);
    },
    [](const cplx* x, const cplx* y, std::size_t n) {
      double v[2];
      avx2::dotc(raw(x), raw(y), n, v);
      return cplx{v[0], v[1]};
    },
    [](const cplx* x, std::size_t n) { return avx2::norm_sq(raw(x), n); },
};

const KernelTable& select() {
  const char* env = std::getenv("ERAE_KERNELS");
  if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable* avx2_kernels() noexcept {
  static const bool ok = avx2::compiled() && host_has_avx2();
  return ok ? &kAvx2 : nullptr;
}

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace erae::kernels
