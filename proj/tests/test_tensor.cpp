#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ar3/eig.hpp"
#include "ar3/metric.hpp"
#include "ar3/rng.hpp"
#include "ar3/tensor.hpp"
#include "test_support.hpp"

using ar3::Matrix;
using ar3::Metric;
using ar3::Rng;
using ar3::SymTensor3;
using ar3::Vector;

namespace {

SymTensor3 t112_pattern() {
  // n=2, unit entries at every permutation of (0,0,1), zero elsewhere.
  std::vector<double> e(8, 0.0);
  e[0 * 4 + 0 * 2 + 1] = 1.0;
  e[0 * 4 + 1 * 2 + 0] = 1.0;
  e[1 * 4 + 0 * 2 + 0] = 1.0;
  return SymTensor3::dense(2, std::move(e));
}

}  // namespace

TEST_CASE("diagonal contractions") {
  Vector t(2);
  t << 1.0, 2.0;
  SymTensor3 tt = SymTensor3::diagonal(t);
  Vector s(2);
  s << 1.0, 1.0;
  CHECK(tt.contract3(s) == doctest::Approx(3.0).epsilon(1e-14));
  Vector c2 = tt.contract2(s);
  CHECK(c2[0] == doctest::Approx(1.0));
  CHECK(c2[1] == doctest::Approx(2.0));
  Matrix c1 = tt.contract1(s);
  CHECK(c1(0, 0) == doctest::Approx(1.0));
  CHECK(c1(1, 1) == doctest::Approx(2.0));
  CHECK(c1(0, 1) == 0.0);
}

TEST_CASE("dense pattern contractions match index-sum oracle") {
  SymTensor3 tt = t112_pattern();
  Vector s(2);
  s << 1.0, 1.0;
  CHECK(tt.contract3(s) == doctest::Approx(3.0).epsilon(1e-14));
  Vector c2 = tt.contract2(s);
  CHECK(c2[0] == doctest::Approx(2.0));
  CHECK(c2[1] == doctest::Approx(1.0));
  CHECK(support::tensor_apply3(tt, s, s, s) == doctest::Approx(3.0));
}

TEST_CASE("lowrank contraction is sum of cubed inner products") {
  Matrix fac(2, 1);
  fac << 1.0, 2.0;
  SymTensor3 tt = SymTensor3::lowrank(fac);
  Vector s(2);
  s << 1.0, 1.0;
  CHECK(tt.contract3(s) == doctest::Approx(27.0).epsilon(1e-14));
}

TEST_CASE("contraction consistency across orders") {
  Rng rng(31);
  for (int kind = 0; kind < 4; ++kind) {
    const int n = 4;
    ar3::QuarticModel m = support::random_model(rng, n, kind, false);
    const SymTensor3& tt = m.T;
    Vector s = rng.normal_vector(n);
    Matrix c1 = tt.contract1(s);
    Vector c2 = tt.contract2(s);
    double c3 = tt.contract3(s);
    CHECK((c1 * s - c2).norm() <= 1e-12 * (1.0 + c2.norm()));
    CHECK(std::abs(s.dot(c2) - c3) <= 1e-12 * (1.0 + std::abs(c3)));
    CHECK((c1 - c1.transpose()).norm() <= 1e-12 * (1.0 + c1.norm()));
  }
}

TEST_CASE("argument-order symmetry of the trilinear form") {
  Rng rng(32);
  const int n = 3;
  std::vector<double> e(27);
  for (auto& x : e) x = rng.normal();
  SymTensor3 tt = SymTensor3::dense(n, std::move(e));
  Vector u = rng.normal_vector(n), v = rng.normal_vector(n), s = rng.normal_vector(n);
  const double ref = support::tensor_apply3(tt, u, v, s);
  CHECK(support::tensor_apply3(tt, v, u, s) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(support::tensor_apply3(tt, s, v, u) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(u.dot(tt.contract1(s) * v) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(s.dot(tt.contract1(u) * v) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("representation equivalence after densify") {
  Rng rng(33);
  for (int kind = 1; kind < 3; ++kind) {
    const int n = 5;
    ar3::QuarticModel m = support::random_model(rng, n, kind, false);
    SymTensor3 dense = m.T.densified();
    for (int rep = 0; rep < 5; ++rep) {
      Vector s = rng.normal_vector(n);
      const double a = m.T.contract3(s);
      const double b = dense.contract3(s);
      CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
      CHECK((m.T.contract2(s) - dense.contract2(s)).norm() <=
            1e-12 * (1.0 + m.T.contract2(s).norm()));
    }
  }
}

TEST_CASE("frobenius bound values") {
  CHECK(SymTensor3::zero(3).frobenius_bound() == 0.0);

  Vector t(2);
  t << 3.0, 4.0;
  const double diag_bound = SymTensor3::diagonal(t).frobenius_bound();
  CHECK(diag_bound >= 4.0);
  CHECK(diag_bound <= 5.0 + 1e-12);
  CHECK(diag_bound == doctest::Approx(5.0));

  // Three unit entries (the permutations of one off-diagonal index triple).
  CHECK(t112_pattern().frobenius_bound() == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("lambda_w special cases") {
  Vector t(3);
  t << 2.0, -5.0, 1.0;
  CHECK(ar3::lambda_w(SymTensor3::diagonal(t), Metric::identity(3)) ==
        doctest::Approx(5.0));

  Vector t2(2);
  t2 << 8.0, 1.0;
  Matrix w(2, 2);
  w << 4.0, 0.0, 0.0, 1.0;  // diag(|8|^(2/3), |1|^(2/3))
  CHECK(ar3::lambda_w(SymTensor3::diagonal(t2), Metric(w)) == doctest::Approx(1.0));

  CHECK(ar3::lambda_w(t112_pattern(), Metric::identity(2)) ==
        doctest::Approx(std::sqrt(3.0)));

  // Diagonal with non-identity W scales by lambda_min(W)^(-3/2).
  Matrix w3 = Matrix::Identity(3, 3) * 0.25;
  CHECK(ar3::lambda_w(SymTensor3::diagonal(t), Metric(w3)) ==
        doctest::Approx(5.0 * std::pow(0.25, -1.5)));
}

TEST_CASE("lambda_w bounds the bilinear tensor ratio") {
  Rng rng(34);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 3;  // 2..4
    ar3::QuarticModel m = support::random_model(rng, n, 1 + i % 3, i % 2 == 1);
    const double lw = ar3::lambda_w(m.T, m.W);
    for (int rep = 0; rep < 200; ++rep) {
      Vector u = rng.normal_vector(n);
      Vector v = rng.normal_vector(n);
      const double nu = m.W.norm(u), nv = m.W.norm(v);
      if (nu == 0.0 || nv == 0.0) continue;
      const double ratio =
          std::abs(support::tensor_apply3(m.T, u, v, v)) / (nu * nv * nv);
      CHECK(ratio <= lw * (1.0 + 1e-10));
      ++checked;
    }
  }
  CHECK(checked > 10000);
}

TEST_CASE("generalized eigendecomposition") {
  SUBCASE("identity metric diagonal") {
    Matrix a(2, 2);
    a << 2.0, 0.0, 0.0, 3.0;
    ar3::GenEig ge = ar3::generalized_eig(a, Metric::identity(2));
    CHECK(ge.eigenvalues[0] == doctest::Approx(2.0));
    CHECK(ge.eigenvalues[1] == doctest::Approx(3.0));
  }
  SUBCASE("A equal to W gives unit eigenvalues") {
    Rng rng(35);
    Matrix w = support::random_spd(rng, 4);
    ar3::GenEig ge = ar3::generalized_eig(w, Metric(w));
    for (int i = 0; i < 4; ++i) CHECK(ge.eigenvalues[i] == doctest::Approx(1.0));
  }
  SUBCASE("residuals") {
    Rng rng(36);
    const int n = 5;
    Matrix a = ar3::symmetrize(rng.normal_matrix(n, n));
    Matrix w = support::random_spd(rng, n);
    Metric met(w);
    ar3::GenEig ge = ar3::generalized_eig(a, met);
    Matrix d = ge.eigenvalues.asDiagonal();
    CHECK((a * ge.vectors - w * ge.vectors * d).norm() <=
          1e-10 * std::max(1.0, a.norm()));
    CHECK((ge.vectors.transpose() * w * ge.vectors - Matrix::Identity(n, n))
              .norm() <= 1e-10 * std::max(1.0, a.norm()));
    for (int i = 0; i + 1 < n; ++i) CHECK(ge.eigenvalues[i] <= ge.eigenvalues[i + 1]);
  }
  SUBCASE("pencil eigenvalues are congruence invariant") {
    Rng rng(37);
    const int n = 4;
    Matrix a = ar3::symmetrize(rng.normal_matrix(n, n));
    Matrix w = support::random_spd(rng, n);
    Matrix q = rng.normal_matrix(n, n);
    q.diagonal().array() += 3.0;  // comfortably invertible
    ar3::GenEig base = ar3::generalized_eig(a, Metric(w));
    ar3::GenEig cong = ar3::generalized_eig(ar3::symmetrize(q.transpose() * a * q),
                                            Metric(ar3::symmetrize(q.transpose() * w * q)));
    for (int i = 0; i < n; ++i)
      CHECK(cong.eigenvalues[i] ==
            doctest::Approx(base.eigenvalues[i]).epsilon(1e-8));
  }
}

TEST_CASE("contraction op counter moves") {
  SymTensor3::reset_contraction_ops();
  Rng rng(38);
  Vector s = rng.normal_vector(6);
  SymTensor3 tt = SymTensor3::diagonal(rng.normal_vector(6));
  (void)tt.contract3(s);
  const auto after_diag = SymTensor3::contraction_ops();
  CHECK(after_diag > 0);
  std::vector<double> e(216);
  for (auto& x : e) x = rng.normal();
  SymTensor3 dd = SymTensor3::dense(6, std::move(e));
  (void)dd.contract3(s);
  CHECK(SymTensor3::contraction_ops() - after_diag > after_diag);
}

TEST_CASE("metric basics") {
  Rng rng(39);
  Matrix w = support::random_spd(rng, 3);
  Metric met(w);
  Vector v = rng.normal_vector(3);
  CHECK(met.norm2(v) == doctest::Approx(v.dot(w * v)));
  CHECK(met.norm(v) >= std::sqrt(met.lambda_min()) * v.norm() - 1e-12);
  CHECK(Metric::identity(3).is_identity());
  CHECK_FALSE(met.is_identity());
  Matrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS(Metric(bad));
}
