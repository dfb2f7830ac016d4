// Property suites behind `erae verify`.

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "erae/cli.hpp"
#include "erae/convex_hull.hpp"
#include "erae/pure_entropy.hpp"
#include "erae/random_states.hpp"
#include "erae/roof_oracle.hpp"
#include "erae/symmetric.hpp"
#include "erae/two_qubit.hpp"

namespace erae::cli {

namespace {

class Checker {
 public:
  explicit Checker(std::string name) { rep_.name = std::move(name); }

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    rep_.passed = false;
    rep_.failures.push_back(what);
  }

  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(12);
    s << what << ": got " << got << ", want " << want << " +- " << tol;
    expect(std::abs(got - want) <= tol, s.str());
  }

  void note(const std::string& n) { rep_.notes.push_back(n); }

  SuiteReport done() { return std::move(rep_); }

 private:
  SuiteReport rep_;
};

std::string fmt(double v, int prec = 10) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

SuiteReport alpha_critical_suite() {
  Checker c("alpha-critical");
  const double ac = alpha_critical();
  c.near(ac, (std::sqrt(7.0) - 1.0) / 2.0, 1e-9, "alpha_c");
  c.near(3.0 * (ac - 1.0) + (2.0 * ac - 1.0) * ac, 0.0, 1e-12, "quadratic condition");
  c.expect(convexity_region(ac + 1e-3).kind == ConvexityKind::ConvexEverywhere, "Omega convex just above alpha_c");
  c.expect(convexity_region(ac - 1e-3).kind == ConvexityKind::SignChange, "Omega not convex just below alpha_c");
  c.expect(convexity_region(0.4).kind == ConvexityKind::ConcaveEverywhere, "Omega concave at alpha = 0.4");
  c.note("alpha_c=" + fmt(ac));
  return c.done();
}

SuiteReport iso_eof_d3_suite() {
  Checker c("iso-eof-d3");
  const std::size_t d = 3;
  const double f0 = iso_tangent_F(d);
  c.near(f0, 8.0 / 9.0, 1e-15, "tangent point");
  const double linear = 3.0 * (f0 - 1.0) + std::log2(3.0);
  c.near(epsilon_iso(f0, d), linear, 1e-9, "continuity at F0");
  c.near(eof_isotropic({d, 1.0 / 3.0}), 0.0, 1e-9, "continuity at 1/d");
  c.expect(std::abs(iso_tangent_residual(d)) < 1e-8, "tangent residual below 1e-8");
  c.expect(iso_eof_convexity_witness(d).verified, "epsilon convex then concave");
  for (double F : {0.5, 0.8, 0.95})
    c.near(erae_isotropic({d, F}, Alpha::von_neumann()), eof_isotropic({d, F}), 1e-6, "hull vs EoF at F=" + fmt(F, 3));
  c.note("F0=" + fmt(f0));
  return c.done();
}

SuiteReport oracle_suite() {
  Checker c("oracle-vs-closed-form");
  std::mt19937_64 rng(20240601);
  OracleConfig cfg;
  cfg.restarts = 4;
  cfg.seed = 11;
  for (std::size_t i = 0; i < 4; ++i) {
    const TwoQubitState st(random_density(2, 2, 2 + i % 3, rng));
    for (double a : {0.83, 1.0, 2.0}) {
      const Alpha alpha = Alpha::of(a);
      const double cf = erae_closed_form(st, alpha);
      const double orc = minimize_roof(st.rho(), alpha, cfg).value;
      const std::string tag = "state " + std::to_string(i) + " alpha " + fmt(a, 3);
      c.expect(orc >= cf - 1e-6, tag + ": oracle below closed form");
      c.expect(orc <= cf + 1e-4, tag + ": oracle above closed form by more than 1e-4");
    }
  }
  const double w = minimize_roof(werner_density({2, 0.8}), Alpha::of(2.0), cfg).value;
  c.near(w, -std::log2(1.0 - 0.32), 1e-4, "Werner d=2 F=0.8 alpha=2");
  return c.done();
}

SuiteReport werner_alpha0_suite() {
  Checker c("werner-alpha0");
  for (std::size_t d : {2u, 3u, 4u})
    for (int i = 1; i <= 9; ++i) {
      const double F = 0.1 * i;
      c.near(erae_werner({d, F}, Alpha::zero_limit()), F, 1e-6, "d=" + std::to_string(d) + " F=" + fmt(F, 2));
    }
  return c.done();
}

SuiteReport werner_dimension_suite() {
  Checker c("werner-dimension");
  double worst = 0.0;
  for (double a : {0.0, 0.3, 0.7, 1.0, 2.0})
    for (int i = -4; i <= 10; ++i) {
      const double F = 0.1 * i;
      const Alpha alpha = Alpha::of(a);
      worst = std::max(worst, std::abs(erae_werner({2, F}, alpha) - erae_werner({5, F}, alpha)));
    }
  c.expect(worst <= 1e-9, "d=2 vs d=5 differ by " + fmt(worst, 3));
  return c.done();
}

SuiteReport iso_alpha0_suite() {
  Checker c("iso-alpha0");
  for (std::size_t d : {2u, 3u, 5u}) {
    const double dd = static_cast<double>(d);
    for (int i = 1; i < 20; ++i) {
      const double F = 0.05 * i;
      if (F <= 1.0 / dd) continue;
      const double want = (F * dd - 1.0) / (dd - 1.0) * std::log2(dd);
      c.near(erae_isotropic({d, F}, Alpha::zero_limit()), want, 1e-6, "d=" + std::to_string(d) + " F=" + fmt(F, 2));
    }
  }
  return c.done();
}

SuiteReport eta_limit_suite() {
  Checker c("eta-limit");
  double worst = 0.0;
  for (std::size_t d : {2u, 3u, 5u})
    for (int i = 0; i <= 100; ++i) {
      const double F = 0.01 * i;
      const double eps = epsilon_iso(F, d);
      for (double a : {1.0 - 1e-6, 1.0 + 1e-6}) worst = std::max(worst, std::abs(eta_iso(F, Alpha::of(a), d) - eps));
    }
  c.expect(worst <= 1e-4, "eta vs epsilon differ by " + fmt(worst, 3));
  return c.done();
}

// Reorders a three-qubit vector from A,B,C to A,C,B.
StateVector swap_bc(const StateVector& psi) {
  StateVector out(8);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t cc = 0; cc < 2; ++cc) out[a * 4 + cc * 2 + b] = psi[a * 4 + b * 2 + cc];
  return out;
}

SuiteReport monogamy_suite() {
  Checker c("monogamy");
  std::mt19937_64 rng(77);
  const Alpha two = Alpha::of(2.0);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const StateVector psi = random_pure_state(8, rng);
    const double whole = renyi_pure(SchmidtSpectrum(schmidt_coefficients(psi, 2, 4)), two);
    const auto pair = [&](const StateVector& v) {
      const ComplexMatrix rho = partial_trace(ComplexMatrix::outer(v), 4, 2, Subsystem::A);
      return erae_closed_form(TwoQubitState(DensityMatrix(rho, 2, 2)), two);
    };
    if (whole + 1e-8 < pair(psi) + pair(swap_bc(psi))) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " of 100 states violate R2 monogamy");
  return c.done();
}

SuiteReport hull_suite() {
  Checker c("hull");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const double a = u(rng);
    const double b = u(rng);
    const double k = 3.0 + 5.0 * std::abs(u(rng));
    const auto f = [=](double x) { return a * x * x * x + b * std::sin(k * x); };
    HullOptions opts;
    opts.grid = 401;
    const HullCurve h = lower_envelope(f, -1.0, 1.0, opts);
    for (int i = 0; i <= 200; ++i) {
      const double x = -1.0 + 0.01 * i;
      if (evaluate(h, x) > f(x) + 1e-9) {
        c.expect(false, "hull above f in trial " + std::to_string(t));
        break;
      }
    }
    for (std::size_t i = 1; i + 1 < h.support_xs.size(); ++i) {
      const double s0 = (h.support_ys[i] - h.support_ys[i - 1]) / (h.support_xs[i] - h.support_xs[i - 1]);
      const double s1 = (h.support_ys[i + 1] - h.support_ys[i]) / (h.support_xs[i + 1] - h.support_xs[i]);
      if (s1 < s0 - 1e-9) {
        c.expect(false, "hull slopes decrease in trial " + std::to_string(t));
        break;
      }
    }
  }
  return c.done();
}

SuiteReport twirl_suite() {
  Checker c("twirl");
  std::mt19937_64 rng(3);
  for (std::size_t d : {2u, 3u}) {
    const DensityMatrix rho = random_density(d, d, d * d, rng);
    const WernerSpec w = twirl_werner(rho);
    c.near(f_werner(werner_density(w)), f_werner(rho), 1e-10, "Werner twirl keeps F, d=" + std::to_string(d));
    c.near(twirl_werner(werner_density(w)).F, w.F, 1e-10, "Werner twirl idempotent, d=" + std::to_string(d));
    const IsotropicSpec s = twirl_isotropic(rho);
    c.near(f_isotropic(isotropic_density(s)), f_isotropic(rho), 1e-10, "isotropic twirl keeps F, d=" + std::to_string(d));
    c.near(twirl_isotropic(isotropic_density(s)).F, s.F, 1e-10, "isotropic twirl idempotent, d=" + std::to_string(d));
  }
  return c.done();
}

const std::map<std::string, std::function<SuiteReport()>>& registry() {
  static const std::map<std::string, std::function<SuiteReport()>> r{
      {"alpha-critical", alpha_critical_suite}, {"iso-eof-d3", iso_eof_d3_suite},
      {"oracle-vs-closed-form", oracle_suite},  {"werner-alpha0", werner_alpha0_suite},
      {"werner-dimension", werner_dimension_suite}, {"iso-alpha0", iso_alpha0_suite},
      {"eta-limit", eta_limit_suite},           {"monogamy", monogamy_suite},
      {"hull", hull_suite},                     {"twirl", twirl_suite},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : registry()) n.push_back(k);
    return n;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name) { return registry().at(name)(); }

}  // namespace erae::cli
