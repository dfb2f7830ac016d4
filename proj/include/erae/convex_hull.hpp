#pragma once

// Lower convex envelope co(f) of a scalar function on a closed interval.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace erae {

struct SampledCurve {
  std::vector<double> xs;  // strictly increasing, xs.front() == lo, xs.back() == hi
  std::vector<double> ys;
};

/// Piecewise-linear lower envelope through its extreme points.
struct HullCurve {
  std::vector<double> support_xs;
  std::vector<double> support_ys;

  double lo() const { return support_xs.front(); }
  double hi() const { return support_xs.back(); }
};

struct HullOptions {
  std::size_t grid = 4001;
  double refine_tol = 1e-9;
  double min_cell = 1e-7;
  /// Points where f may jump. Each gets nodes at bp and bp +- 1e-12.
  std::vector<double> breakpoints;
};

/// Monotone-chain lower hull of samples. Collinear middle points are dropped.
HullCurve lower_hull_of_samples(const SampledCurve& curve);

/// Sample f on a uniform grid, take the lower hull, then refine every cell
/// whose midpoint lies more than refine_tol / 2 below the current hull, and
/// search the cells beside each hull vertex for a dip under the adjacent
/// segment, until no cell disagrees or cells are narrower than min_cell. Throws
/// NonFiniteFunction, DomainError for a bad interval or grid < 3.
HullCurve lower_envelope(const std::function<double(double)>& f, double lo, double hi,
                         const HullOptions& opts = {});

/// Linear interpolation; OutOfDomain beyond [lo, hi] +- 1e-12.
double evaluate(const HullCurve& hull, double x);

}  // namespace erae
