#include "erae/pure_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "erae/config.hpp"
#include "erae/error.hpp"

namespace erae {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_open_unit(double c) {
  if (!(c > 0.0 && c < 1.0))
    throw Error(ErrorCode::DomainError, "derivative needs concurrence in the open interval (0, 1)");
}

double clamp_concurrence(double c) {
  if (!std::isfinite(c) || c < -kTol.rank_cutoff || c > 1.0 + kTol.rank_cutoff)
    throw Error(ErrorCode::DomainError, "concurrence outside [0, 1]");
  return std::clamp(c, 0.0, 1.0);
}

}  // namespace

Alpha Alpha::of(double value) {
  if (!std::isfinite(value) || value < 0.0)
    throw Error(ErrorCode::InvalidAlpha, "alpha must be finite and non-negative");
  if (value < kTol.alpha_snap) return zero_limit();
  if (std::abs(value - 1.0) < kTol.alpha_snap) return von_neumann();
  return Alpha(value, AlphaMode::Generic);
}

SchmidtSpectrum::SchmidtSpectrum(std::vector<double> mu) : mu_(std::move(mu)) {
  if (mu_.empty()) throw Error(ErrorCode::DomainError, "empty Schmidt spectrum");
  for (auto& m : mu_) {
    if (!std::isfinite(m) || m < -kTol.rank_cutoff)
      throw Error(ErrorCode::DomainError, "Schmidt coefficients must be non-negative");
    m = std::max(m, 0.0);
  }
  const double sum = std::accumulate(mu_.begin(), mu_.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-10) throw Error(ErrorCode::DomainError, "Schmidt coefficients must sum to 1");
  std::sort(mu_.begin(), mu_.end(), std::greater<>());
}

double renyi_of_probabilities(std::span<const double> p, Alpha alpha) noexcept {
  switch (alpha.mode()) {
    case AlphaMode::ZeroLimit: {
      const auto rank = std::count_if(p.begin(), p.end(), [](double x) { return x > kTol.rank_cutoff; });
      return rank > 0 ? std::log2(static_cast<double>(rank)) : 0.0;
    }
    case AlphaMode::VonNeumannLimit: {
      double h = 0.0;
      for (double x : p)
        if (x > 0.0) h -= x * std::log2(x);
      return h;
    }
    case AlphaMode::Generic:
      break;
  }
  const double a = alpha.value();
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s += std::pow(x, a);
  return std::log2(s) / (1.0 - a);
}

double renyi_pure(const SchmidtSpectrum& mu, Alpha alpha) {
  // Flat and product spectra give exactly 0 and log2(n) regardless of the
  // pow/log roundoff path.
  return std::max(0.0, renyi_of_probabilities(mu.mu(), alpha));
}

SchmidtPair schmidt_pair(double concurrence) {
  const double c = clamp_concurrence(concurrence);
  const double root = std::sqrt((1.0 - c) * (1.0 + c));
  const double plus = 0.5 * (1.0 + root);
  return {plus, c * c / (4.0 * plus)};
}

double omega(double concurrence, Alpha alpha) {
  const double c = clamp_concurrence(concurrence);
  if (alpha.mode() == AlphaMode::ZeroLimit) return c > 0.0 ? 1.0 : 0.0;
  if (c == 0.0) return 0.0;
  if (c == 1.0) return 1.0;
  const auto [lp, lm] = schmidt_pair(c);
  const double p[2] = {lp, lm};
  return std::max(0.0, renyi_of_probabilities(p, alpha));
}

double omega_dC(double concurrence, Alpha alpha) {
  require_open_unit(concurrence);
  const double c = concurrence;
  if (alpha.mode() == AlphaMode::ZeroLimit) return 0.0;
  const auto [lp, lm] = schmidt_pair(c);
  const double s = std::sqrt((1.0 - c) * (1.0 + c));
  const double d1 = c / (2.0 * s);
  if (alpha.mode() == AlphaMode::VonNeumannLimit) return d1 * std::log2(lp / lm);
  const double a = alpha.value();
  const double sum = std::pow(lp, a) + std::pow(lm, a);
  return a * d1 * (std::pow(lm, a - 1.0) - std::pow(lp, a - 1.0)) / ((1.0 - a) * sum * kLn2);
}

double omega_d2C(double concurrence, Alpha alpha) {
  require_open_unit(concurrence);
  const double c = concurrence;
  if (alpha.mode() == AlphaMode::ZeroLimit) return 0.0;
  const auto [lp, lm] = schmidt_pair(c);
  const double s = std::sqrt((1.0 - c) * (1.0 + c));
  if (alpha.mode() == AlphaMode::VonNeumannLimit)
    return (std::log(lp / lm) / (2.0 * s * s * s) - 1.0 / (s * s)) / kLn2;

  const double a = alpha.value();
  const double x = lm / lp;
  const double d1 = c / (2.0 * s);
  const double sum = std::pow(lp, a) + std::pow(lm, a);
  const double xa1 = std::pow(x, a - 1.0);
  const double g = 1.0 - std::pow(x, 2.0 * a - 1.0) - (2.0 * a - 1.0) * (1.0 - x) * xa1;
  const double k = (1.0 - xa1) * (1.0 - xa1) + (1.0 + x) * (1.0 + x) / (2.0 * x * (1.0 - x)) * g;
  return -a * std::pow(lp, 2.0 * a - 2.0) * d1 * d1 * k / ((1.0 - a) * sum * sum * kLn2);
}

double alpha_critical() noexcept { return 0.5 * (std::sqrt(7.0) - 1.0); }

ConvexityReport convexity_region(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::InvalidAlpha, "convexity analysis needs alpha in (0, 1)");
  if (alpha <= 0.5) return {alpha, ConvexityKind::ConcaveEverywhere, std::nullopt};
  if (alpha >= alpha_critical()) return {alpha, ConvexityKind::ConvexEverywhere, std::nullopt};

  const Alpha a = Alpha::of(alpha);
  double lo = 1e-6;
  double hi = 1.0 - 1e-6;
  const double f_lo = omega_d2C(lo, a);
  const double f_hi = omega_d2C(hi, a);
  if (f_lo > 0.0 && f_hi > 0.0) return {alpha, ConvexityKind::ConvexEverywhere, std::nullopt};
  if (f_lo < 0.0 && f_hi < 0.0) return {alpha, ConvexityKind::ConcaveEverywhere, std::nullopt};
  const bool positive_low = f_lo > 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if ((omega_d2C(mid, a) > 0.0) == positive_low)
      lo = mid;
    else
      hi = mid;
  }
  return {alpha, ConvexityKind::SignChange, 0.5 * (lo + hi)};
}

}  // namespace erae
