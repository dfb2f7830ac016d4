#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "erae/symmetric.hpp"
#include "test_util.hpp"

using namespace erae;
using erae::test::throws_code;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

// tr(S rho) with S built from its definition, without swap_operator().
double trace_swap(const DensityMatrix& rho, std::size_t d) {
  cplx t = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) t += rho.matrix()(i * d + j, j * d + i);
  return t.real();
}

// Pure state psi = sum_i sqrt(mu_i) |i> (x) V|i>.
StateVector schmidt_form(const std::vector<double>& mu, const ComplexMatrix& v) {
  const std::size_t d = mu.size();
  StateVector psi(d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) psi[a * d + b] = std::sqrt(mu[a]) * v(b, a);
  return psi;
}

std::vector<double> random_mu(std::size_t d, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> mu(d);
  double s = 0;
  for (auto& x : mu) s += (x = e(rng));
  for (auto& x : mu) x /= s;
  return mu;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK(throws_code([] { make_werner_spec(1, 0.5); }, ErrorCode::InvalidSpec));
  CHECK(throws_code([] { make_werner_spec(2, 1.5); }, ErrorCode::InvalidSpec));
  CHECK(throws_code([] { make_isotropic_spec(3, -0.1); }, ErrorCode::InvalidSpec));
  CHECK(throws_code([] { werner_density({2, -1.2}); }, ErrorCode::InvalidSpec));
  CHECK(make_werner_spec(3, 5e-15).F == 0.0);
  CHECK(make_isotropic_spec(4, 0.25 + 5e-15).F == 0.25);
  CHECK(make_isotropic_spec(4, 0.25 + 1e-10).F > 0.25);
}

TEST_CASE("Werner densities") {
  const DensityMatrix singlet = werner_density({2, 1.0});
  const double s = 1 / std::sqrt(2.0);
  const StateVector psi{0, s, -s, 0};
  CHECK(max_abs_diff(singlet.matrix(), ComplexMatrix::outer(psi)) < 1e-14);

  const DensityMatrix sym = werner_density({2, -1.0});
  const ComplexMatrix want = (ComplexMatrix::identity(4) + swap_operator(2)) * cplx(1.0 / 6.0);
  CHECK(max_abs_diff(sym.matrix(), want) < 1e-14);

  CHECK(trace_swap(werner_density({3, 0.8}), 3) == doctest::Approx(-0.8).epsilon(1e-12));
  for (std::size_t d : {2u, 3u, 4u, 5u})
    for (double F : {-1.0, -0.4, 0.0, 0.3, 0.9, 1.0}) {
      const DensityMatrix rho = werner_density({d, F});
      CHECK(std::abs(f_werner(rho) - F) <= 1e-10);
      CHECK(std::abs(rho.matrix().trace() - 1.0) <= 1e-12);
      CHECK(hermitian_eig(rho.matrix()).eigenvalues.back() >= -1e-12);
    }
}

TEST_CASE("isotropic densities") {
  for (std::size_t d : {2u, 3u, 4u}) {
    const double dd = static_cast<double>(d);
    CHECK(max_abs_diff(isotropic_density({d, 1.0}).matrix(), max_entangled_projector(d)) < 1e-14);
    const ComplexMatrix mixed = ComplexMatrix::identity(d * d) * cplx(1.0 / (dd * dd));
    CHECK(max_abs_diff(isotropic_density({d, 1.0 / (dd * dd)}).matrix(), mixed) < 1e-14);
    for (double F : {0.0, 0.2, 0.6, 1.0}) CHECK(std::abs(f_isotropic(isotropic_density({d, F})) - F) <= 1e-10);
  }
  const DensityMatrix r = isotropic_density({3, 0.85});
  cplx t = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) t += r.matrix()(i * 4, j * 4) / 3.0;
  CHECK(t.real() == doctest::Approx(0.85).epsilon(1e-12));
}

TEST_CASE("invariant functionals") {
  for (std::size_t d : {2u, 3u, 5u}) {
    const double dd = static_cast<double>(d);
    const DensityMatrix mixed(ComplexMatrix::identity(d * d) * cplx(1.0 / (dd * dd)), d, d);
    CHECK(f_werner(mixed) == doctest::Approx(-1.0 / dd));
    CHECK(f_isotropic(mixed) == doctest::Approx(1.0 / (dd * dd)));
    CHECK(f_isotropic(DensityMatrix(max_entangled_projector(d), d, d)) == doctest::Approx(1.0));
  }
  const DensityMatrix rect(ComplexMatrix::identity(6) * cplx(1.0 / 6), 2, 3);
  CHECK(throws_code([&] { f_werner(rect); }, ErrorCode::DimensionMismatch));
  CHECK(throws_code([&] { f_isotropic(rect); }, ErrorCode::DimensionMismatch));
  CHECK(throws_code([&] { twirl_werner(rect); }, ErrorCode::DimensionMismatch));

  // Schmidt-form expressions on random pure states
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 2 + t % 4;
    const auto mu = random_mu(d, rng);
    const ComplexMatrix v = erae::test::random_unitary(d, rng);
    const DensityMatrix rho = DensityMatrix::pure(schmidt_form(mu, v), d, d);
    cplx fw = 0, tr = 0;
    for (std::size_t i = 0; i < d; ++i) {
      tr += std::sqrt(mu[i]) * v(i, i);
      for (std::size_t j = 0; j < d; ++j) fw += std::sqrt(mu[i] * mu[j]) * v(j, i) * std::conj(v(i, j));
    }
    CHECK(std::abs(f_werner(rho) + fw.real()) < 1e-10);
    CHECK(std::abs(f_isotropic(rho) - std::norm(tr) / static_cast<double>(d)) < 1e-10);
  }
}

TEST_CASE("twirling") {
  CHECK(twirl_werner(werner_density({3, 0.4})).F == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(twirl_isotropic(DensityMatrix(ComplexMatrix::identity(9) * cplx(1.0 / 9), 3, 3)).F ==
        doctest::Approx(1.0 / 9));
  std::mt19937_64 rng(12);
  for (int t = 0; t < 40; ++t) {
    const std::size_t d = 2 + t % 3;
    const DensityMatrix rho = random_density(d, d, 1 + t % (d * d), rng);
    const WernerSpec w = twirl_werner(rho);
    CHECK(w.d == d);
    CHECK(std::abs(trace_swap(werner_density(w), d) - trace_swap(rho, d)) <= 1e-10);
    CHECK(std::abs(twirl_werner(werner_density(w)).F - w.F) <= 1e-10);
    const IsotropicSpec s = twirl_isotropic(rho);
    CHECK(std::abs(f_isotropic(isotropic_density(s)) - f_isotropic(rho)) <= 1e-10);
    CHECK(std::abs(twirl_isotropic(isotropic_density(s)).F - s.F) <= 1e-10);
  }
  // Averaging over random U (x) U converges to the projection.
  const std::size_t d = 2;
  const DensityMatrix rho = random_density(d, d, 4, rng);
  ComplexMatrix avg(4, 4);
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const ComplexMatrix u = erae::test::random_unitary(d, rng);
    const ComplexMatrix uu = kron(u, u);
    avg = avg + uu * rho.matrix() * uu.adjoint();
  }
  avg = avg * cplx(1.0 / n);
  CHECK(max_abs_diff(avg, werner_density(twirl_werner(rho)).matrix()) < 2e-2);
}

TEST_CASE("werner omega and hull") {
  for (double a : {0.0, 0.3, 1.0, 2.0}) {
    CHECK(werner_omega(-0.5, Alpha::of(a)) == 0.0);
    CHECK(werner_omega(1.0, Alpha::of(a)) == doctest::Approx(1.0));
    CHECK(erae_werner({3, -0.2}, Alpha::of(a)) == 0.0);
    CHECK(erae_werner({3, 0.0}, Alpha::of(a)) == 0.0);
  }
  CHECK(werner_omega(0.8, Alpha::of(0.9)) == omega(0.8, Alpha::of(0.9)));
  CHECK(throws_code([] { werner_omega(1.2, Alpha::of(1.0)); }, ErrorCode::DomainError));
  CHECK(erae_werner({2, 0.8}, Alpha::zero_limit()) == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(erae_werner({2, 0.8}, Alpha::von_neumann()) == doctest::Approx(0.72193).epsilon(1e-5));

  const std::vector<double> alphas = [] {
    std::vector<double> a;
    for (int i = 1; i <= 40; ++i) a.push_back(0.05 * i);
    return a;
  }();
  for (int i = -10; i <= 10; ++i) {
    const double F = 0.1 * i;
    // dimension independence
    for (double a : {0.0, 0.3, 0.7, 1.0, 2.0}) {
      const double v2 = erae_werner({2, F}, Alpha::of(a));
      for (std::size_t d : {3u, 4u, 5u}) CHECK(std::abs(erae_werner({d, F}, Alpha::of(a)) - v2) <= 1e-10);
    }
    // non-increasing in alpha, dominated by omega
    double prev = 2.0;
    for (double a : alphas) {
      const double v = erae_werner({2, F}, Alpha::of(a));
      CHECK(v <= prev + 1e-12);
      CHECK(v <= werner_omega(F, Alpha::of(a)) + 1e-9);
      prev = v;
    }
    // Omega(., alpha) is convex above alpha_c so the hull is omega itself
    for (double a : {0.9, 1.0, 2.0, 5.0})
      CHECK(std::abs(erae_werner({2, F}, Alpha::of(a)) - werner_omega(F, Alpha::of(a))) <= 1e-9);
    // concave below 1/2: the chord from 0 to 1
    CHECK(std::abs(erae_werner({2, F}, Alpha::of(0.3)) - std::max(F, 0.0)) <= 1e-9);
  }
}

TEST_CASE("isotropic closed forms") {
  CHECK(gamma_iso(1.0 / 3.0, 3) == doctest::Approx(1.0));
  CHECK(gamma_iso(1.0, 3) == doctest::Approx(1.0 / 3.0));
  CHECK(gamma_iso(0.85, 3) == doctest::Approx(0.719984).epsilon(1e-6));
  CHECK(throws_code([] { gamma_iso(1.1, 3); }, ErrorCode::DomainError));

  const double g = gamma_iso(0.85, 3);
  const double eps_oracle = h2(g) + (1 - g) * std::log2(2.0);
  CHECK(epsilon_iso(0.85, 3) == doctest::Approx(eps_oracle).epsilon(1e-12));
  CHECK(epsilon_iso(0.85, 3) == doctest::Approx(1.13547).epsilon(1e-5));
  CHECK(eta_iso(0.85, Alpha::von_neumann(), 3) == doctest::Approx(eps_oracle).epsilon(1e-12));
  CHECK(eof_isotropic({3, 0.85}) == doctest::Approx(1.13547).epsilon(1e-5));
  CHECK(erae_isotropic({3, 0.95}, Alpha::von_neumann()) == doctest::Approx(1.43496).epsilon(1e-5));

  for (std::size_t d : {2u, 3u, 4u, 7u}) {
    const double dd = static_cast<double>(d);
    for (double a : {0.0, 0.5, 1.0, 2.0}) {
      CHECK(eta_iso(1.0 / dd, Alpha::of(a), d) == 0.0);
      CHECK(eta_iso(1.0, Alpha::of(a), d) == doctest::Approx(std::log2(dd)).epsilon(1e-12));
      CHECK(erae_isotropic({d, 0.5 / dd}, Alpha::of(a)) == 0.0);
    }
    CHECK(epsilon_iso(1.0, d) == doctest::Approx(std::log2(dd)).epsilon(1e-12));
    CHECK(eof_isotropic({d, 1.0}) == doctest::Approx(std::log2(dd)).epsilon(1e-12));
    CHECK(eof_isotropic({d, 1.0 / dd}) == 0.0);
    // eta against a direct Renyi evaluation of its spectrum
    for (double F : {0.6, 0.9})
      for (double a : {0.4, 1.7}) {
        const double gg = gamma_iso(F, d);
        const double s = std::pow(gg, a) + std::pow(dd - 1, 1 - a) * std::pow(1 - gg, a);
        CHECK(eta_iso(F, Alpha::of(a), d) == doctest::Approx(std::log2(s) / (1 - a)).epsilon(1e-12));
      }
    // zero-limit hull is the line from (1/d, 0) to (1, log2 d)
    for (int i = 1; i < 20; ++i) {
      const double F = 0.05 * i;
      if (F <= 1 / dd) continue;
      CHECK(std::abs(erae_isotropic({d, F}, Alpha::zero_limit()) - (F * dd - 1) / (dd - 1) * std::log2(dd)) <= 1e-6);
    }
  }
}

TEST_CASE("isotropic invariants") {
  for (std::size_t d : {2u, 3u, 4u, 6u}) {
    const double dd = static_cast<double>(d);
    // monotone in F, continuous at breakpoints
    double prev = 0;
    for (int i = 0; i <= 1000; ++i) {
      const double v = eof_isotropic({d, 0.001 * i});
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    CHECK(std::abs(eof_isotropic({d, 1 / dd + 1e-13})) <= 1e-9);
    if (d >= 3) {
      const double f0 = iso_tangent_F(d);
      CHECK(std::abs(eof_isotropic({d, f0 - 1e-13}) - eof_isotropic({d, f0 + 1e-13})) <= 1e-9);
      CHECK(std::abs(epsilon_iso(f0, d) - (dd * std::log2(dd - 1) / (dd - 2) * (f0 - 1) + std::log2(dd))) <= 1e-9);
    }
    // hull agrees with the three-branch formula
    for (int i = 0; i <= 20; ++i) {
      const double F = 0.05 * i;
      CHECK(std::abs(erae_isotropic({d, F}, Alpha::von_neumann()) - eof_isotropic({d, F})) <= 1e-6);
      CHECK(std::abs(eta_iso(F, Alpha::of(1 - 1e-6), d) - epsilon_iso(F, d)) <= 1e-4);
      CHECK(std::abs(eta_iso(F, Alpha::of(1 + 1e-6), d) - epsilon_iso(F, d)) <= 1e-4);
      double p = 10;
      for (int k = 1; k <= 40; ++k) {
        const double v = erae_isotropic({d, F}, Alpha::of(0.05 * k));
        CHECK(v <= p + 1e-12);
        CHECK(v <= eta_iso(F, Alpha::of(0.05 * k), d) + 1e-9);
        p = v;
      }
    }
  }
}

TEST_CASE("d=2 isotropic and Werner families coincide") {
  for (int i = -10; i <= 10; ++i) {
    const double F = 0.1 * i;
    for (double a : {0.0, 0.3, 0.7, 1.0, 2.0})
      CHECK(std::abs(erae_isotropic({2, (1 + F) / 2}, Alpha::of(a)) - erae_werner({2, F}, Alpha::of(a))) <= 1e-8);
  }
}

TEST_CASE("epsilon derivatives against finite differences") {
  const double h = 1e-5;
  for (std::size_t d : {2u, 3u, 5u, 9u})
    for (double F : {0.55, 0.7, 0.85, 0.97}) {
      const double d1 = (epsilon_iso(F + h, d) - epsilon_iso(F - h, d)) / (2 * h);
      const double d2 = (epsilon_iso_dF(F + h, d) - epsilon_iso_dF(F - h, d)) / (2 * h);
      CHECK(epsilon_iso_dF(F, d) == doctest::Approx(d1).epsilon(1e-6));
      CHECK(epsilon_iso_d2F(F, d) == doctest::Approx(d2).epsilon(1e-5));
    }
}

TEST_CASE("tangent point and convexity witness") {
  CHECK(iso_tangent_F(3) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(iso_tangent_F(4) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(throws_code([] { iso_tangent_F(1); }, ErrorCode::InvalidSpec));
  for (std::size_t d = 3; d <= 10; ++d) CHECK(std::abs(iso_tangent_residual(d)) < 1e-8);

  const auto w3 = iso_eof_convexity_witness(3);
  CHECK(w3.x_plus == doctest::Approx((3 - 2 * std::sqrt(2.0)) / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(w3.x_plus == doctest::Approx(0.12132).epsilon(1e-4));
  for (std::size_t d = 3; d <= 10; ++d) {
    const auto w = iso_eof_convexity_witness(d);
    const double r = std::sqrt(static_cast<double>(d) - 1);
    CHECK(w.x_plus > 0.0);
    CHECK(w.x_plus < 1.0);
    CHECK(w.sign_changes == 1);
    CHECK(w.positive_then_negative);
    CHECK(w.verified);
    CHECK(w.f_at_x_plus < 0.0);
    CHECK(std::log(r) - r / 2 + 1 / (2 * r) < 0.0);
  }
  CHECK(throws_code([] { iso_eof_convexity_witness(2); }, ErrorCode::InvalidSpec));
}

TEST_CASE("hull cache under concurrent use") {
  clear_hull_cache();
  CHECK(hull_cache_size() == 0);
  const std::vector<double> fs{0.1, 0.35, 0.6, 0.85};
  std::vector<double> serial;
  for (double F : fs) serial.push_back(erae_werner({2, F}, Alpha::of(0.7)) + erae_isotropic({3, F}, Alpha::of(0.7)));
  const std::size_t filled = hull_cache_size();
  clear_hull_cache();
  std::vector<std::thread> pool;
  std::vector<std::vector<double>> got(8);
  for (std::size_t t = 0; t < got.size(); ++t)
    pool.emplace_back([&, t] {
      for (double F : fs) got[t].push_back(erae_werner({2, F}, Alpha::of(0.7)) + erae_isotropic({3, F}, Alpha::of(0.7)));
    });
  for (auto& th : pool) th.join();
  for (const auto& g : got) CHECK(g == serial);
  CHECK(hull_cache_size() == filled);
}
