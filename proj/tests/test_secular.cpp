#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ar3/optimality.hpp"
#include "ar3/rng.hpp"
#include "ar3/secular.hpp"
#include "ar3/testsets.hpp"
#include "test_support.hpp"

using ar3::Matrix;
using ar3::Metric;
using ar3::QuarticModel;
using ar3::Rng;
using ar3::SecularResult;
using ar3::SecularStatus;
using ar3::SymTensor3;
using ar3::Vector;

namespace {

double residual_norm(const Matrix& h, const Vector& g, const SymTensor3& t,
                     const Metric& w, const SecularResult& r) {
  Matrix sys = h + 0.5 * t.contract1(r.s);
  sys += r.lambda * w.matrix();
  return (sys * r.s + g).norm();
}

}  // namespace

TEST_CASE("newton step on the univariate quadratic root") {
  Matrix h(1, 1);
  h << 1.0;
  Vector g(1);
  g << -1.0;
  ar3::NewtonStep step =
      ar3::newton_update(h, g, Metric::identity(1), 1.0, 1.0);
  REQUIRE(step.cholesky_ok);
  CHECK(step.s[0] == doctest::Approx(0.5));
  CHECK(step.phi == doctest::Approx(1.0));
  CHECK(step.delta_lambda == doctest::Approx(-2.0 / 3.0));

  CHECK_THROWS(ar3::newton_update(h, Vector::Zero(1), Metric::identity(1), 1.0, 1.0));
  CHECK_THROWS(ar3::newton_update(h, g, Metric::identity(1), 1.0, 0.0));
}

TEST_CASE("univariate pinned root") {
  Matrix h(1, 1);
  h << 1.0;
  Vector g(1);
  g << -1.0;
  SecularResult r = ar3::secular_solve(h, g, SymTensor3::zero(1), 1.0,
                                       Metric::identity(1));
  REQUIRE(r.status == SecularStatus::converged);
  CHECK(r.s[0] == doctest::Approx(0.682328).epsilon(1e-6));
  CHECK(r.lambda == doctest::Approx(0.465571).epsilon(1e-5));
  CHECK(r.counters.cholesky_count >= 1);
  CHECK(r.counters.newton_steps >= 1);
}

TEST_CASE("bivariate separable fixed point matches a bisection oracle") {
  Matrix h(2, 2);
  h << 1.0, 0.0, 0.0, 2.0;
  Vector g(2);
  g << -1.0, -1.0;
  const double sigma = 1.0;
  SecularResult r = ar3::secular_solve(h, g, SymTensor3::diagonal(Vector::Zero(2)),
                                       sigma, Metric::identity(2));
  REQUIRE(r.status == SecularStatus::converged);

  // Oracle: lambda solves sigma * (1/(1+l)^2 + 1/(2+l)^2) = l by bisection.
  double lo = 0.0, hi = 4.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f =
        sigma * (1.0 / ((1.0 + mid) * (1.0 + mid)) + 1.0 / ((2.0 + mid) * (2.0 + mid))) -
        mid;
    (f > 0.0 ? lo : hi) = mid;
  }
  const double lam = 0.5 * (lo + hi);
  CHECK(r.lambda == doctest::Approx(lam).epsilon(1e-8));
  CHECK(r.s[0] == doctest::Approx(1.0 / (1.0 + lam)).epsilon(1e-8));
  CHECK(r.s[1] == doctest::Approx(1.0 / (2.0 + lam)).epsilon(1e-8));
}

TEST_CASE("degenerate gradient with indefinite curvature is signaled") {
  Matrix h(2, 2);
  h << -1.0, 0.0, 0.0, 1.0;
  Vector g = Vector::Zero(2);
  SecularResult r = ar3::secular_solve(h, g, SymTensor3::zero(2), 1.0,
                                       Metric::identity(2));
  CHECK(r.status == SecularStatus::degenerate_g);
  CHECK(ar3::is_safeguard(r.status));
}

TEST_CASE("zero gradient with convex curvature converges to the origin") {
  Matrix h(2, 2);
  h << 2.0, 0.0, 0.0, 1.0;
  SecularResult r = ar3::secular_solve(h, Vector::Zero(2), SymTensor3::zero(2),
                                       1.0, Metric::identity(2));
  REQUIRE(r.status == SecularStatus::converged);
  CHECK(r.s.norm() == 0.0);
  CHECK(r.lambda == 0.0);
}

TEST_CASE("hard case is detected") {
  Matrix h(2, 2);
  h << -2.0, 0.0, 0.0, 1.0;
  Vector g(2);
  g << 0.0, 1.0;  // orthogonal to the leading eigenvector
  SecularResult r = ar3::secular_solve(h, g, SymTensor3::zero(2), 1.0,
                                       Metric::identity(2));
  CHECK(r.status == SecularStatus::hard_case);
  CHECK(ar3::is_safeguard(r.status));
}

TEST_CASE("quadratic quartically regularized solves match brute force") {
  Rng rng(71);
  int converged = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + i % 2;
    QuarticModel m = support::random_model(rng, n, 0, i % 3 == 0);
    SecularResult r = ar3::secular_solve(m.H, m.g, m.T, m.sigma, m.W);
    if (r.status != SecularStatus::converged) continue;
    ++converged;
    ar3::OracleResult oracle = ar3::brute_force_min(m);
    const double got = ar3::value(m, r.s);
    CHECK(got <= oracle.value + 1e-6 * (1.0 + std::abs(oracle.value)));
    CHECK(ar3::gradient(m, r.s).norm() <= 1e-6 * (1.0 + m.g.norm()));
  }
  CHECK(converged >= 15);  // safeguards must stay rare on generic inputs
}

TEST_CASE("solver contract on random diagonal-tensor instances") {
  Rng rng(72);
  ar3::SecularConfig cfg;
  for (int i = 0; i < 50; ++i) {
    const int n = 5 + i % 6;
    QuarticModel m = ar3::generate(ar3::standard_spec(
        ar3::SetKind::diagonal, n, 1000 + static_cast<std::uint64_t>(i)));
    SecularResult r = ar3::secular_solve(m.H, m.g, m.T, m.sigma, m.W, cfg);
    if (r.status != SecularStatus::converged) continue;
    // Stationarity residual within the outer tolerance.
    CHECK(r.residual <= cfg.eps_kappa);
    CHECK(residual_norm(m.H, m.g, m.T, m.W, r) <=
          cfg.eps_kappa * (1.0 + r.lambda));
    // Multiplier consistency.
    CHECK(std::abs(r.lambda - m.sigma * m.W.norm2(r.s)) <=
          1e-6 * std::max(1.0, r.lambda));
    // The model gradient vanishes at the root.
    CHECK(ar3::gradient(m, r.s).norm() <= 1e-5 * (1.0 + m.g.norm()));
  }
}

TEST_CASE("metric-weighted solve") {
  Rng rng(73);
  const int n = 2;
  for (int i = 0; i < 10; ++i) {
    QuarticModel m = support::random_model(rng, n, 1, true);
    SecularResult r = ar3::secular_solve(m.H, m.g, m.T, m.sigma, m.W);
    if (r.status != SecularStatus::converged) continue;
    CHECK(ar3::gradient(m, r.s).norm() <= 1e-6 * (1.0 + m.g.norm()));
    CHECK(std::abs(r.lambda - m.sigma * m.W.norm2(r.s)) <=
          1e-6 * std::max(1.0, r.lambda));
  }
}

TEST_CASE("indefinite Hessian forces a positive multiplier") {
  Matrix h(2, 2);
  h << -5.0, 0.0, 0.0, 1.0;
  Vector g(2);
  g << 1.0, 1.0;
  SecularResult r = ar3::secular_solve(h, g, SymTensor3::zero(2), 1.0,
                                       Metric::identity(2));
  REQUIRE(r.status == SecularStatus::converged);
  CHECK(r.lambda >= 5.0);
  QuarticModel m{0.0, g, h, SymTensor3::zero(2), 1.0, Metric::identity(2)};
  ar3::OracleResult oracle = ar3::brute_force_min(m);
  CHECK(ar3::value(m, r.s) <= oracle.value + 1e-8 * (1.0 + std::abs(oracle.value)));
}

TEST_CASE("config validation") {
  ar3::SecularConfig cfg;
  cfg.eps_l = 1e-9;  // must stay above eps_kappa
  cfg.eps_kappa = 1e-8;
  CHECK_THROWS(cfg.validate());
  ar3::SecularConfig ok;
  CHECK_NOTHROW(ok.validate());
  CHECK(std::string(ar3::to_string(SecularStatus::hard_case)) == "hard_case");
  CHECK_FALSE(ar3::is_safeguard(SecularStatus::converged));
}
