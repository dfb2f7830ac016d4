#include "erae/symmetric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <tuple>

#include "erae/config.hpp"
#include "erae/error.hpp"

namespace erae {

namespace {

void check_dim(std::size_t d) {
  if (d < 2 || d > kMaxLocalDim) throw Error(ErrorCode::InvalidSpec, "local dimension must be in [2, 16]");
}

void require_same_sides(const DensityMatrix& rho) {
  if (rho.dim_a() != rho.dim_b())
    throw Error(ErrorCode::DimensionMismatch, "symmetric families need dimA == dimB");
}

enum class Family { Werner, Isotropic };

using HullKey = std::tuple<Family, AlphaMode, long long, std::size_t, std::size_t>;

struct HullCache {
  std::shared_mutex mutex;
  std::map<HullKey, std::shared_ptr<const HullCurve>> entries;
};

HullCache& cache() {
  static HullCache c;
  return c;
}

constexpr std::size_t kHullGrid = 4001;

// One hull per (family, alpha, d, grid). alpha is keyed to 12 decimals.
template <typename Build>
std::shared_ptr<const HullCurve> cached_hull(Family family, Alpha alpha, std::size_t d, Build&& build) {
  const long long alpha_key = std::llround(alpha.value() * 1e12);
  const HullKey key{family, alpha.mode(), alpha_key, d, kHullGrid};
  HullCache& c = cache();
  {
    std::shared_lock lock(c.mutex);
    if (auto it = c.entries.find(key); it != c.entries.end()) return it->second;
  }
  auto hull = std::make_shared<const HullCurve>(build());
  std::unique_lock lock(c.mutex);
  c.entries[key] = hull;  // identical value if another thread raced us
  return hull;
}

double log2d(std::size_t d) { return std::log2(static_cast<double>(d)); }

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

void check_open_iso(double F, std::size_t d) {
  check_dim(d);
  if (!(F > 1.0 / static_cast<double>(d) && F < 1.0))
    throw Error(ErrorCode::DomainError, "derivative needs F in the open interval (1/d, 1)");
}

}  // namespace

WernerSpec make_werner_spec(std::size_t d, double F) {
  check_dim(d);
  if (!std::isfinite(F) || F < -1.0 - kTol.breakpoint_snap || F > 1.0 + kTol.breakpoint_snap)
    throw Error(ErrorCode::InvalidSpec, "Werner parameter F must lie in [-1, 1]");
  F = std::clamp(F, -1.0, 1.0);
  if (std::abs(F) < kTol.breakpoint_snap) F = 0.0;
  return {d, F};
}

IsotropicSpec make_isotropic_spec(std::size_t d, double F) {
  check_dim(d);
  if (!std::isfinite(F) || F < -kTol.breakpoint_snap || F > 1.0 + kTol.breakpoint_snap)
    throw Error(ErrorCode::InvalidSpec, "isotropic parameter F must lie in [0, 1]");
  F = std::clamp(F, 0.0, 1.0);
  const double sep = 1.0 / static_cast<double>(d);
  if (std::abs(F - sep) < kTol.breakpoint_snap) F = sep;
  return {d, F};
}

ComplexMatrix swap_operator(std::size_t d) {
  ComplexMatrix s(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return s;
}

ComplexMatrix max_entangled_projector(std::size_t d) {
  ComplexMatrix p(d * d, d * d);
  const double w = 1.0 / static_cast<double>(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) p(i * d + i, j * d + j) = w;
  return p;
}

DensityMatrix werner_density(const WernerSpec& raw) {
  const WernerSpec spec = make_werner_spec(raw.d, raw.F);
  const std::size_t d = spec.d;
  const double dd = static_cast<double>(d);
  const ComplexMatrix id = ComplexMatrix::identity(d * d);
  const ComplexMatrix sw = swap_operator(d);
  const double w_sym = (1.0 - spec.F) / 2.0 / (dd * dd + dd);
  const double w_anti = (1.0 + spec.F) / 2.0 / (dd * dd - dd);
  ComplexMatrix m = (id + sw) * w_sym + (id - sw) * w_anti;
  return DensityMatrix(std::move(m), d, d);
}

DensityMatrix isotropic_density(const IsotropicSpec& raw) {
  const IsotropicSpec spec = make_isotropic_spec(raw.d, raw.F);
  const std::size_t d = spec.d;
  const double dd = static_cast<double>(d);
  const ComplexMatrix p = max_entangled_projector(d);
  ComplexMatrix m = p * spec.F + (ComplexMatrix::identity(d * d) - p) * ((1.0 - spec.F) / (dd * dd - 1.0));
  return DensityMatrix(std::move(m), d, d);
}

double f_werner(const DensityMatrix& rho) {
  require_same_sides(rho);
  const std::size_t d = rho.dim_a();
  const ComplexMatrix& m = rho.matrix();
  // tr(swap rho) = sum_ij <ji|rho|ij>
  double t = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) t += m(j * d + i, i * d + j).real();
  return -t;
}

double f_isotropic(const DensityMatrix& rho) {
  require_same_sides(rho);
  const std::size_t d = rho.dim_a();
  const ComplexMatrix& m = rho.matrix();
  double t = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) t += m(i * d + i, j * d + j).real();
  return t / static_cast<double>(d);
}

WernerSpec twirl_werner(const DensityMatrix& rho) { return make_werner_spec(rho.dim_a(), f_werner(rho)); }

IsotropicSpec twirl_isotropic(const DensityMatrix& rho) {
  return make_isotropic_spec(rho.dim_a(), f_isotropic(rho));
}

double werner_omega(double F, Alpha alpha) {
  if (!std::isfinite(F) || F < -1.0 - kTol.breakpoint_snap || F > 1.0 + kTol.breakpoint_snap)
    throw Error(ErrorCode::DomainError, "Werner parameter F must lie in [-1, 1]");
  if (F <= kTol.breakpoint_snap) return 0.0;
  return omega(std::min(F, 1.0), alpha);
}

double erae_werner(const WernerSpec& raw, Alpha alpha) {
  const WernerSpec spec = make_werner_spec(raw.d, raw.F);
  if (spec.F <= 0.0) return 0.0;
  const auto hull = cached_hull(Family::Werner, alpha, spec.d, [&] {
    HullOptions opts;
    opts.grid = kHullGrid;
    opts.breakpoints = {0.0};
    return lower_envelope([alpha](double f) { return werner_omega(f, alpha); }, -1.0, 1.0, opts);
  });
  return std::max(0.0, evaluate(*hull, spec.F));
}

double gamma_iso(double F, std::size_t d) {
  check_dim(d);
  if (!std::isfinite(F) || F < 0.0 || F > 1.0) throw Error(ErrorCode::DomainError, "F must lie in [0, 1]");
  const double dd = static_cast<double>(d);
  const double s = std::sqrt(F) + std::sqrt((dd - 1.0) * (1.0 - F));
  return std::clamp(s * s / dd, 1.0 / dd, 1.0);
}

double eta_iso(double F, Alpha alpha, std::size_t d) {
  const IsotropicSpec spec = make_isotropic_spec(d, F);
  if (spec.F <= 1.0 / static_cast<double>(d)) return 0.0;
  switch (alpha.mode()) {
    case AlphaMode::ZeroLimit:
      return log2d(d);
    case AlphaMode::VonNeumannLimit:
      return epsilon_iso(spec.F, d);
    case AlphaMode::Generic:
      break;
  }
  const double a = alpha.value();
  const double g = gamma_iso(spec.F, d);
  const double rest = std::pow(static_cast<double>(d) - 1.0, 1.0 - a) * std::pow(1.0 - g, a);
  return std::max(0.0, std::log2(std::pow(g, a) + rest) / (1.0 - a));
}

double epsilon_iso(double F, std::size_t d) {
  const IsotropicSpec spec = make_isotropic_spec(d, F);
  if (spec.F <= 1.0 / static_cast<double>(d)) return 0.0;
  const double g = gamma_iso(spec.F, d);
  return binary_entropy(g) + (1.0 - g) * std::log2(static_cast<double>(d) - 1.0);
}

double epsilon_iso_dF(double F, std::size_t d) {
  check_open_iso(F, d);
  const double g = gamma_iso(F, d);
  const double dgamma = -std::sqrt(g * (1.0 - g)) / std::sqrt(F * (1.0 - F));
  const double deps_dgamma = std::log2((1.0 - g) / (g * (static_cast<double>(d) - 1.0)));
  return deps_dgamma * dgamma;
}

double epsilon_iso_d2F(double F, std::size_t d) {
  check_open_iso(F, d);
  const double dd = static_cast<double>(d);
  const double g = gamma_iso(F, d);
  const double q = F * (1.0 - F);
  const double root = std::sqrt(dd - 1.0);
  const double bracket = std::log(g * (dd - 1.0) / (1.0 - g)) - 2.0 * dd * std::sqrt(q) / root;
  return root / (2.0 * dd * q * std::sqrt(q)) * bracket / std::numbers::ln2;
}

double erae_isotropic(const IsotropicSpec& raw, Alpha alpha) {
  const IsotropicSpec spec = make_isotropic_spec(raw.d, raw.F);
  const double sep = 1.0 / static_cast<double>(spec.d);
  if (spec.F <= sep) return 0.0;
  const std::size_t d = spec.d;
  const auto hull = cached_hull(Family::Isotropic, alpha, d, [&] {
    HullOptions opts;
    opts.grid = kHullGrid;
    opts.breakpoints = {sep};
    return lower_envelope([alpha, d](double f) { return eta_iso(f, alpha, d); }, 0.0, 1.0, opts);
  });
  return std::max(0.0, evaluate(*hull, spec.F));
}

double eof_isotropic(const IsotropicSpec& raw) {
  const IsotropicSpec spec = make_isotropic_spec(raw.d, raw.F);
  const std::size_t d = spec.d;
  const double dd = static_cast<double>(d);
  if (spec.F <= 1.0 / dd) return 0.0;
  if (d == 2 || spec.F <= iso_tangent_F(d)) return epsilon_iso(spec.F, d);
  return dd * std::log2(dd - 1.0) / (dd - 2.0) * (spec.F - 1.0) + log2d(d);
}

double iso_tangent_F(std::size_t d) {
  if (d < 2) throw Error(ErrorCode::InvalidSpec, "tangent point needs d >= 2");
  const double dd = static_cast<double>(d);
  return 4.0 * (dd - 1.0) / (dd * dd);
}

double iso_tangent_residual(std::size_t d) {
  if (d < 3) throw Error(ErrorCode::InvalidSpec, "tangent residual needs d >= 3");
  const double f0 = iso_tangent_F(d);
  return log2d(d) - epsilon_iso(f0, d) - (1.0 - f0) * epsilon_iso_dF(f0, d);
}

ConvexityWitness iso_eof_convexity_witness(std::size_t d) {
  if (d <= 2) throw Error(ErrorCode::InvalidSpec, "convexity witness needs d >= 3");
  check_dim(d);
  const double dd = static_cast<double>(d);
  const double root = std::sqrt(dd - 1.0);
  ConvexityWitness w{};
  w.x_plus = (-2.0 * root + dd) / ((dd - 2.0) * root);
  const double x = w.x_plus;
  w.f_at_x_plus = std::log(dd * x / (1.0 - x) + 1.0) - dd * x / (1.0 + (dd - 1.0) * x * x);

  int first_sign = 0;
  int last_sign = 0;
  const double sep = 1.0 / dd;
  for (double F = sep + 1e-3; F < 1.0; F += 1e-3) {
    const double v = epsilon_iso_d2F(F, d);
    const int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (first_sign == 0) first_sign = sign;
    if (last_sign != 0 && sign != last_sign) ++w.sign_changes;
    last_sign = sign;
  }
  w.positive_then_negative = first_sign > 0 && last_sign < 0;
  w.verified = w.sign_changes == 1 && w.positive_then_negative && x > 0.0 && x < 1.0 && w.f_at_x_plus < 0.0;
  return w;
}

std::size_t hull_cache_size() {
  std::shared_lock lock(cache().mutex);
  return cache().entries.size();
}

void clear_hull_cache() {
  std::unique_lock lock(cache().mutex);
  cache().entries.clear();
}

}  // namespace erae
