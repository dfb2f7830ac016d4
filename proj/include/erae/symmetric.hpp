#pragma once

// Werner (U (x) U invariant) and isotropic (U (x) U^* invariant) families:
// constructors, the invariant functionals f_W and f_Psi+, exact twirling,
// and the closed-form entanglement Renyi entropies built from lower convex
// envelopes.

#include <cstddef>

#include "erae/convex_hull.hpp"
#include "erae/linalg.hpp"
#include "erae/pure_entropy.hpp"

namespace erae {

/// d >= 2, F in [-1, 1]; F = -tr(swap rho). Separable iff F <= 0.
struct WernerSpec {
  std::size_t d;
  double F;
};

/// d >= 2, F in [0, 1]; F = <Psi+|rho|Psi+>. Separable iff F <= 1/d.
struct IsotropicSpec {
  std::size_t d;
  double F;
};

/// Validate and snap F to a breakpoint (0 resp. 1/d) when within 1e-14.
/// Throws InvalidSpec.
WernerSpec make_werner_spec(std::size_t d, double F);
IsotropicSpec make_isotropic_spec(std::size_t d, double F);

/// sum_ij |ij><ji|
ComplexMatrix swap_operator(std::size_t d);
/// |Psi+><Psi+| with |Psi+> = sum_i |ii> / sqrt(d)
ComplexMatrix max_entangled_projector(std::size_t d);

DensityMatrix werner_density(const WernerSpec& spec);
DensityMatrix isotropic_density(const IsotropicSpec& spec);

/// -tr(swap rho); DimensionMismatch unless dimA == dimB.
double f_werner(const DensityMatrix& rho);
/// tr(P+ rho); DimensionMismatch unless dimA == dimB.
double f_isotropic(const DensityMatrix& rho);

/// Twirling projects onto the family member with the same invariant.
WernerSpec twirl_werner(const DensityMatrix& rho);
IsotropicSpec twirl_isotropic(const DensityMatrix& rho);

/// omega(F, alpha) = Omega(F, alpha) for F > 0, 0 for F <= 0. Independent of d.
double werner_omega(double F, Alpha alpha);
/// co(omega)(F).
double erae_werner(const WernerSpec& spec, Alpha alpha);

/// gamma(F, d) = (sqrt F + sqrt((d-1)(1-F)))^2 / d
double gamma_iso(double F, std::size_t d);
/// Renyi entropy of (gamma, (1-gamma)/(d-1), ...) for F > 1/d, else 0.
double eta_iso(double F, Alpha alpha, std::size_t d);
/// H2(gamma) + (1 - gamma) log2(d - 1) for F > 1/d, else 0.
double epsilon_iso(double F, std::size_t d);
/// d epsilon / dF on (1/d, 1), chain rule through d gamma / dF.
double epsilon_iso_dF(double F, std::size_t d);
/// d^2 epsilon / dF^2 on (1/d, 1), closed form (bits).
double epsilon_iso_d2F(double F, std::size_t d);
/// co(eta)(F).
double erae_isotropic(const IsotropicSpec& spec, Alpha alpha);
/// Three-branch entanglement of formation (breakpoints 1/d and 4(d-1)/d^2).
double eof_isotropic(const IsotropicSpec& spec);

/// 4(d-1)/d^2. InvalidSpec for d < 2.
double iso_tangent_F(std::size_t d);
/// log2 d - epsilon(F0) - (1 - F0) d epsilon/dF (F0): zero when the line
/// through (1, log2 d) touches epsilon at F0.
double iso_tangent_residual(std::size_t d);

struct ConvexityWitness {
  double x_plus;             // positive zero of the quadratic governing f'(x)
  double f_at_x_plus;        // h(sqrt(d-1)) = ln sqrt(d-1) - (d-2)/(2 sqrt(d-1))
  std::size_t sign_changes;  // of d^2 epsilon/dF^2 on a 1e-3 grid over (1/d, 1)
  bool positive_then_negative;
  bool verified;
};

/// Checks that epsilon(., d) is convex then concave on (1/d, 1). d >= 3.
ConvexityWitness iso_eof_convexity_witness(std::size_t d);

/// Hull cache statistics (mostly for tests).
std::size_t hull_cache_size();
void clear_hull_cache();

}  // namespace erae
