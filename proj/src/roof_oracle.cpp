#include "erae/roof_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "erae/config.hpp"
#include "erae/error.hpp"
#include "erae/kernels.hpp"

namespace erae {

namespace {

constexpr double kReconstructionTol = 1e-8;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Rows sqrt(lambda_i) e_i^T of the nonzero part of the spectrum.
struct Basis {
  std::size_t dim_a;
  std::size_t dim_b;
  std::size_t rank;
  ComplexMatrix rows;
};

Basis eigen_basis(const DensityMatrix& rho) {
  const HermitianSpectrum spec = hermitian_eig(rho.matrix());
  const std::size_t n = rho.dim();
  std::size_t rank = 0;
  while (rank < n && spec.eigenvalues[rank] > kTol.rank_cutoff) ++rank;
  Basis b{rho.dim_a(), rho.dim_b(), rank, ComplexMatrix(rank, n)};
  for (std::size_t i = 0; i < rank; ++i) {
    const double s = std::sqrt(spec.eigenvalues[i]);
    for (std::size_t c = 0; c < n; ++c) b.rows(i, c) = s * spec.eigenvectors(c, i);
  }
  return b;
}

double isometry_defect(const ComplexMatrix& v) {
  const auto& k = kernels::active();
  double worst = 0.0;
  const ComplexMatrix vt = v.transpose();  // rows of vt are columns of v
  for (std::size_t i = 0; i < vt.rows(); ++i)
    for (std::size_t j = i; j < vt.rows(); ++j) {
      const cplx g = k.dotc(vt.data() + i * vt.cols(), vt.data() + j * vt.cols(), vt.cols());
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

// Modified Gram-Schmidt on the columns of v.
void orthonormalize_columns(ComplexMatrix& v) {
  const auto& k = kernels::active();
  ComplexMatrix vt = v.transpose();
  const std::size_t len = vt.cols();
  for (std::size_t i = 0; i < vt.rows(); ++i) {
    cplx* ci = vt.data() + i * len;
    for (std::size_t j = 0; j < i; ++j) {
      const cplx* cj = vt.data() + j * len;
      const cplx proj = k.dotc(cj, ci, len);
      for (std::size_t t = 0; t < len; ++t) ci[t] -= proj * cj[t];
    }
    const double norm = std::sqrt(k.norm_sq(ci, len));
    if (!(norm > 1e-300)) throw Error(ErrorCode::NumericalFailure, "isometry lost rank");
    for (std::size_t t = 0; t < len; ++t) ci[t] /= norm;
  }
  v = vt.transpose();
}

ComplexMatrix haar_isometry(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix v(rows, cols);
  for (cplx& z : v.entries()) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    z = cplx(re, im);
  }
  orthonormalize_columns(v);
  return v;
}

// Sum_k phi_k phi_k^dagger for the rows phi_k of `phi`.
ComplexMatrix rows_gram(const ComplexMatrix& phi) {
  const std::size_t n = phi.cols();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < phi.rows(); ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const cplx a = phi(k, i);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * std::conj(phi(k, j));
    }
  return out;
}

// w * R_alpha(phi / |phi|) for an unnormalized member phi with w = |phi|^2.
class MemberCost {
 public:
  MemberCost(std::size_t dim_a, std::size_t dim_b, Alpha alpha)
      : dim_a_(dim_a),
        dim_b_(dim_b),
        alpha_(alpha),
        work_(dim_a * dim_b + std::min(dim_a, dim_b) * std::min(dim_a, dim_b)),
        mu_(std::min(dim_a, dim_b)) {}

  double operator()(const cplx* phi) {
    const double w = kernels::active().norm_sq(phi, dim_a_ * dim_b_);
    if (w < kTol.min_weight) return 0.0;
    schmidt_coefficients_into(phi, dim_a_, dim_b_, work_.data(), mu_.data());
    for (double& m : mu_) m /= w;
    if (eps_ > 0.0) return w * smoothed();
    return w * renyi_of_probabilities(mu_, alpha_);
  }

  // eps > 0 replaces mu^a by (mu + eps)^a - eps^a, normalized so product
  // states still cost 0. Removes the infinite slope at mu = 0 for a < 1.
  double eps() const noexcept { return eps_; }
  void set_objective(Alpha a, double eps) {
    alpha_ = a;
    eps_ = a.mode() == AlphaMode::Generic ? eps : 0.0;
  }

 private:
  double smoothed() const {
    const double a = alpha_.value();
    const double floor = std::pow(eps_, a);
    double s = 0.0;
    for (double m : mu_) s += std::pow(std::max(m, 0.0) + eps_, a) - floor;
    s /= std::pow(1.0 + eps_, a) - floor;
    return std::log2(s) / (1.0 - a);
  }

  std::size_t dim_a_;
  std::size_t dim_b_;
  Alpha alpha_;
  double eps_ = 0.0;
  std::vector<cplx> work_;
  std::vector<double> mu_;
};

struct Point2 {
  double x;
  double y;
  double f;
};

// Nelder-Mead in the plane from `start` (value already known) with edge h.
template <typename F>
Point2 nelder_mead_2d(F&& f, Point2 start, double h, std::size_t max_evals, double xtol) {
  std::array<Point2, 3> s{start, Point2{start.x + h, start.y, 0.0}, Point2{start.x, start.y + h, 0.0}};
  s[1].f = f(s[1].x, s[1].y);
  s[2].f = f(s[2].x, s[2].y);
  std::size_t evals = 2;
  const auto at = [&](double x, double y) {
    ++evals;
    return Point2{x, y, f(x, y)};
  };
  while (evals < max_evals) {
    std::sort(s.begin(), s.end(), [](const Point2& a, const Point2& b) { return a.f < b.f; });
    const double size = std::max(std::hypot(s[1].x - s[0].x, s[1].y - s[0].y),
                                 std::hypot(s[2].x - s[0].x, s[2].y - s[0].y));
    if (size < xtol) break;
    const double cx = 0.5 * (s[0].x + s[1].x);
    const double cy = 0.5 * (s[0].y + s[1].y);
    const Point2 r = at(2.0 * cx - s[2].x, 2.0 * cy - s[2].y);
    if (r.f < s[0].f) {
      const Point2 e = at(3.0 * cx - 2.0 * s[2].x, 3.0 * cy - 2.0 * s[2].y);
      s[2] = e.f < r.f ? e : r;
      continue;
    }
    if (r.f < s[1].f) {
      s[2] = r;
      continue;
    }
    const Point2 c = r.f < s[2].f ? at(0.5 * (cx + r.x), 0.5 * (cy + r.y))
                                  : at(0.5 * (cx + s[2].x), 0.5 * (cy + s[2].y));
    if (c.f < std::min(r.f, s[2].f)) {
      s[2] = c;
      continue;
    }
    for (std::size_t i = 1; i < 3; ++i) s[i] = at(0.5 * (s[0].x + s[i].x), 0.5 * (s[0].y + s[i].y));
  }
  return *std::min_element(s.begin(), s.end(), [](const Point2& a, const Point2& b) { return a.f < b.f; });
}

struct Rotation {
  cplx u00, u01, u10, u11;
};

// exp of [[0, -conj z], [z, 0]] with z = x + i y.
Rotation rotation(double x, double y) {
  const double t = std::hypot(x, y);
  if (t == 0.0) return {1.0, 0.0, 0.0, 1.0};
  const cplx e(x / t, y / t);
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {c, -s * std::conj(e), s * e, c};
}

constexpr std::size_t kPairEvals = 60;
constexpr double kPairXtol = 1e-10;
constexpr double kMaxStep = 0.5;
constexpr double kMinStep = 1e-6;
// Smoothed stages only seed the next one.
constexpr double kStageTol = 1e-7;

struct Stage {
  Alpha alpha;
  double eps;
};

class Search {
 public:
  Search(const Basis& basis, std::size_t members, Alpha alpha)
      : basis_(basis), members_(members), cost_fn_(basis.dim_a, basis.dim_b, alpha) {}

  void start(ComplexMatrix v) {
    v_ = std::move(v);
    refresh();
  }

  void set_stage(const Stage& st) {
    cost_fn_.set_objective(st.alpha, st.eps);
    refresh();
  }

  // Pairwise sweeps until the total changes by less than conv_tol (relative,
  // floored at 1) or the sweep budget runs out.
  bool run(std::size_t max_sweeps, double conv_tol) {
    if (cost_fn_.eps() > 0.0) conv_tol = std::max(conv_tol, kStageTol);
    double step = kMaxStep;
    double prev = total();
    for (std::size_t it = 0; it < max_sweeps; ++it) {
      const double moved = sweep(step);
      orthonormalize_columns(v_);
      refresh();
      check_reconstruction();
      const double now = total();
      step = std::clamp(4.0 * moved, kMinStep, kMaxStep);
      if (std::abs(prev - now) <= conv_tol * std::max(1.0, std::abs(now))) return true;
      prev = now;
    }
    return false;
  }

  double total() const {
    double t = 0.0;
    for (double c : cost_) t += c;
    return t;
  }

  const ComplexMatrix& phi() const { return phi_; }

 private:
  void refresh() {
    phi_ = v_ * basis_.rows;
    cost_.assign(members_, 0.0);
    for (std::size_t k = 0; k < members_; ++k) cost_[k] = cost_fn_(phi_.data() + k * phi_.cols());
  }

  void check_reconstruction() const {
    // Compared against the spectral part of rho that the basis spans.
    const ComplexMatrix target = rows_gram(basis_.rows);
    if (max_abs_diff(rows_gram(phi_), target) > kReconstructionTol)
      throw Error(ErrorCode::NumericalFailure, "ensemble drifted from rho");
  }

  // One pass over all member pairs; returns the rms rotation angle taken.
  double sweep(double step) {
    const auto& kern = kernels::active();
    const std::size_t n = phi_.cols();
    const std::size_t r = v_.cols();
    std::vector<cplx> a(n);
    std::vector<cplx> b(n);
    double moved_sq = 0.0;
    std::size_t pairs = 0;
    for (std::size_t k = 0; k < members_; ++k) {
      for (std::size_t l = k + 1; l < members_; ++l) {
        ++pairs;
        cplx* pk = phi_.data() + k * n;
        cplx* pl = phi_.data() + l * n;
        const double base = cost_[k] + cost_[l];
        const auto f = [&](double x, double y) {
          const Rotation u = rotation(x, y);
          std::copy(pk, pk + n, a.begin());
          std::copy(pl, pl + n, b.begin());
          kern.mix2(a.data(), b.data(), n, u.u00, u.u01, u.u10, u.u11);
          return cost_fn_(a.data()) + cost_fn_(b.data());
        };
        const Point2 best = nelder_mead_2d(f, Point2{0.0, 0.0, base}, step, kPairEvals, kPairXtol);
        if (!(best.f < base)) continue;
        const Rotation u = rotation(best.x, best.y);
        kern.mix2(pk, pl, n, u.u00, u.u01, u.u10, u.u11);
        kern.mix2(v_.data() + k * r, v_.data() + l * r, r, u.u00, u.u01, u.u10, u.u11);
        cost_[k] = cost_fn_(pk);
        cost_[l] = cost_fn_(pl);
        moved_sq += best.x * best.x + best.y * best.y;
      }
    }
    return pairs == 0 ? 0.0 : std::sqrt(moved_sq / static_cast<double>(pairs));
  }

  const Basis& basis_;
  std::size_t members_;
  MemberCost cost_fn_;
  ComplexMatrix v_;
  ComplexMatrix phi_;
  std::vector<double> cost_;
};

// Below alpha_c the objective is first smoothed and the smoothing is
// removed in steps. The rank objective is piecewise constant, so the limit
// is approached through small orders before the final polish.
std::vector<Stage> schedule(Alpha alpha) {
  const auto smoothed = [](Alpha a) {
    std::vector<Stage> s;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-6}) s.push_back({a, eps});
    s.push_back({a, 0.0});
    return s;
  };
  if (alpha.mode() == AlphaMode::ZeroLimit) {
    std::vector<Stage> s = smoothed(Alpha::of(0.3));
    s.push_back({Alpha::of(1e-3), 0.0});
    s.push_back({alpha, 0.0});
    return s;
  }
  if (alpha.mode() == AlphaMode::Generic && alpha.value() < alpha_critical()) return smoothed(alpha);
  return {{alpha, 0.0}};
}

EnsembleDecomposition ensemble_from_rows(const ComplexMatrix& phi, std::size_t dim_a, std::size_t dim_b) {
  const auto& kern = kernels::active();
  EnsembleDecomposition e{dim_a, dim_b, {}, {}};
  const std::size_t n = phi.cols();
  for (std::size_t k = 0; k < phi.rows(); ++k) {
    const cplx* row = phi.data() + k * n;
    const double w = kern.norm_sq(row, n);
    if (w < kTol.min_weight) continue;
    const double inv = 1.0 / std::sqrt(w);
    StateVector psi(row, row + n);
    for (cplx& z : psi) z *= inv;
    e.weights.push_back(w);
    e.states.push_back(std::move(psi));
  }
  double sum = 0.0;
  for (double w : e.weights) sum += w;
  for (double& w : e.weights) w /= sum;
  return e;
}

}  // namespace

EnsembleDecomposition ensemble_from_isometry(const DensityMatrix& rho, const ComplexMatrix& v) {
  const Basis basis = eigen_basis(rho);
  if (v.cols() != basis.rank)
    throw Error(ErrorCode::RankMismatch, "isometry needs one column per nonzero eigenvalue");
  if (v.rows() < v.cols() || isometry_defect(v) > kTol.isometry)
    throw Error(ErrorCode::NotIsometry, "V^dagger V differs from the identity");
  if (basis.rank == 1) {
    EnsembleDecomposition e = ensemble_from_rows(basis.rows, rho.dim_a(), rho.dim_b());
    return e;
  }
  return ensemble_from_rows(v * basis.rows, rho.dim_a(), rho.dim_b());
}

double roof_value_of(const EnsembleDecomposition& ensemble, Alpha alpha) {
  double total = 0.0;
  for (std::size_t k = 0; k < ensemble.states.size(); ++k) {
    const std::vector<double> mu = schmidt_coefficients(ensemble.states[k], ensemble.dim_a, ensemble.dim_b);
    total += ensemble.weights[k] * renyi_of_probabilities(mu, alpha);
  }
  return total;
}

ComplexMatrix reconstruct(const EnsembleDecomposition& ensemble) {
  const std::size_t n = ensemble.dim_a * ensemble.dim_b;
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < ensemble.states.size(); ++k) {
    const ComplexMatrix p = ComplexMatrix::outer(ensemble.states[k]);
    out += p * cplx(ensemble.weights[k]);
  }
  return out;
}

OracleResult minimize_roof(const DensityMatrix& rho, Alpha alpha, const OracleConfig& cfg) {
  if (rho.dim_a() > kMaxOracleLocalDim || rho.dim_b() > kMaxOracleLocalDim)
    throw Error(ErrorCode::DimensionTooLarge, "roof minimizer supports at most 9 levels per side");
  const Basis basis = eigen_basis(rho);
  if (basis.rank == 0) throw Error(ErrorCode::InvalidState, "density matrix has no spectrum above cutoff");

  OracleResult result;
  if (basis.rank == 1) {
    result.best = ensemble_from_rows(basis.rows, rho.dim_a(), rho.dim_b());
    result.value = roof_value_of(result.best, alpha);
    result.converged = true;
    return result;
  }

  const std::size_t members = cfg.ensemble_size == 0 ? basis.rank * basis.rank : cfg.ensemble_size;
  if (members < basis.rank)
    throw Error(ErrorCode::RankMismatch, "ensemble_size must be at least the rank of rho");
  const std::size_t restarts = std::max<std::size_t>(cfg.restarts, 1);
  const std::vector<Stage> stages = schedule(alpha);

  double best = std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(r)));
    Search search(basis, members, alpha);
    search.start(haar_isometry(members, basis.rank, rng));
    bool converged = false;
    for (const Stage& st : stages) {
      search.set_stage(st);
      converged = search.run(cfg.max_iters, cfg.conv_tol);
    }
    EnsembleDecomposition e = ensemble_from_rows(search.phi(), rho.dim_a(), rho.dim_b());
    const double value = roof_value_of(e, alpha);
    worst = std::max(worst, value);
    if (value < best) {
      best = value;
      result.best = std::move(e);
      result.converged = converged;
    }
  }
  result.value = best;
  result.spread = worst - best;
  return result;
}

}  // namespace erae
