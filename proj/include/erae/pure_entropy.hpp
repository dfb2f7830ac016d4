#pragma once

// Renyi alpha-entropy of pure bipartite states and the two-qubit function
// Omega(C, alpha) = S_alpha(lambda_+, lambda_-), lambda_pm = (1 +- sqrt(1 - C^2)) / 2.
//
// All entropies are in bits. See units.hpp for rescaling to nats.

#include <optional>
#include <span>
#include <vector>

namespace erae {

enum class AlphaMode { Generic, ZeroLimit, VonNeumannLimit };

/// Entropy order. Values within kTol.alpha_snap of 0 or 1 are treated as
/// the corresponding limit.
class Alpha {
 public:
  /// Throws InvalidAlpha for negative or non-finite input.
  static Alpha of(double value);
  static Alpha zero_limit() { return Alpha(0.0, AlphaMode::ZeroLimit); }
  static Alpha von_neumann() { return Alpha(1.0, AlphaMode::VonNeumannLimit); }

  double value() const noexcept { return value_; }
  AlphaMode mode() const noexcept { return mode_; }

 private:
  Alpha(double v, AlphaMode m) : value_(v), mode_(m) {}
  double value_;
  AlphaMode mode_;
};

/// Probability vector of Schmidt coefficients, stored descending.
class SchmidtSpectrum {
 public:
  /// Entries in [-rank_cutoff, 0) are clamped to zero. Throws DomainError
  /// for negative entries or a sum off 1 by more than 1e-10.
  explicit SchmidtSpectrum(std::vector<double> mu);

  std::span<const double> mu() const noexcept { return mu_; }

 private:
  std::vector<double> mu_;
};

double renyi_pure(const SchmidtSpectrum& mu, Alpha alpha);

/// Unchecked variant for hot loops: `p` need not be sorted or normalized to
/// more than roundoff; entries <= 0 are skipped.
double renyi_of_probabilities(std::span<const double> p, Alpha alpha) noexcept;

/// lambda_+ and lambda_- for concurrence C in [0, 1], computed without
/// cancellation in lambda_-.
struct SchmidtPair {
  double plus;
  double minus;
};
SchmidtPair schmidt_pair(double concurrence);

double omega(double concurrence, Alpha alpha);
/// d Omega / dC on the open interval (0, 1).
double omega_dC(double concurrence, Alpha alpha);
/// d^2 Omega / dC^2 on (0, 1), from the closed form in terms of
/// x = lambda_- / lambda_+ and D1 = C / (2 sqrt(1 - C^2)).
double omega_d2C(double concurrence, Alpha alpha);

enum class ConvexityKind { ConcaveEverywhere, ConvexEverywhere, SignChange };

struct ConvexityReport {
  double alpha;
  ConvexityKind kind;
  std::optional<double> c0;  // set for SignChange
};

/// Convexity of Omega(., alpha) on (0, 1) for alpha in (0, 1).
ConvexityReport convexity_region(double alpha);

/// (sqrt(7) - 1) / 2: the smallest alpha for which Omega(., alpha) is convex.
double alpha_critical() noexcept;

}  // namespace erae
