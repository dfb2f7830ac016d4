#pragma once

#include <cstddef>

namespace erae {

/// Numerical tolerances shared by every module. One place to look when a
/// check trips on roundoff.
struct Tolerances {
  double hermitian = 1e-10;        // max |M - M^dagger| for a DensityMatrix
  double hermitian_eig = 1e-8;     // input symmetry accepted by hermitian_eig
  double trace = 1e-10;            // |tr rho - 1|
  double psd_clamp = 1e-10;        // eigenvalues in [-psd_clamp, 0) snap to 0
  double psd_reject = 1e-6;        // eigenvalues below -psd_reject are rejected
  double rank_cutoff = 1e-12;      // mu_i above this counts toward rank
  double alpha_snap = 1e-12;       // alpha within this of 0 or 1 is a limit
  double breakpoint_snap = 1e-14;  // F within this of a family breakpoint snaps
  double normalization = 1e-10;    // unit-norm pure state check
  double isometry = 1e-10;         // |V^dagger V - I|
  double min_weight = 1e-14;       // ensemble members lighter than this drop
};

inline constexpr Tolerances kTol{};

/// Largest local dimension accepted anywhere (CLI and constructors).
inline constexpr std::size_t kMaxLocalDim = 16;
/// Largest local dimension accepted by the roof minimizer.
inline constexpr std::size_t kMaxOracleLocalDim = 9;

}  // namespace erae
