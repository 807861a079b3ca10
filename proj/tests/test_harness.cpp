#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ar3/experiment.hpp"
#include "ar3/rng.hpp"
#include "ar3/serialization.hpp"
#include "ar3/testsets.hpp"
#include "test_support.hpp"

using ar3::GenSpec;
using ar3::Matrix;
using ar3::Metric;
using ar3::QuarticModel;
using ar3::Rng;
using ar3::SetKind;
using ar3::SymTensor3;
using ar3::Vector;

namespace {

int comma_count(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), ','));
}

}  // namespace

TEST_CASE("same GenSpec yields identical draws") {
  for (SetKind kind : {SetKind::diagonal, SetKind::lowrank, SetKind::full,
                       SetKind::ill_hessian, SetKind::ill_tensor}) {
    GenSpec spec = ar3::standard_spec(kind, 7, 12345, 2);
    QuarticModel a = ar3::generate(spec);
    QuarticModel b = ar3::generate(spec);
    CHECK((a.g - b.g).norm() == 0.0);
    CHECK((a.H - b.H).norm() == 0.0);
    CHECK(a.sigma == b.sigma);
    Rng probe(1);
    Vector u = probe.normal_vector(7);
    Vector va = a.T.contract2(u);
    Vector vb = b.T.contract2(u);
    CHECK((va - vb).norm() == 0.0);
  }
}

TEST_CASE("set shapes and scales") {
  SUBCASE("diagonal") {
    QuarticModel m = ar3::generate(ar3::standard_spec(SetKind::diagonal, 100, 5));
    CHECK(m.T.kind() == SymTensor3::Kind::diagonal);
    CHECK(m.dim() == 100);
    CHECK(m.sigma == 100.0);
    CHECK(m.W.is_identity());
    CHECK(m.f0 == 0.0);
  }
  SUBCASE("lowrank rank matches the GenSpec") {
    QuarticModel m = ar3::generate(ar3::standard_spec(SetKind::lowrank, 12, 5, 3));
    CHECK(m.T.kind() == SymTensor3::Kind::lowrank);
    CHECK(m.T.rank() == 3);
  }
  SUBCASE("full tensor is supersymmetric") {
    QuarticModel m = ar3::generate(ar3::standard_spec(SetKind::full, 5, 5));
    CHECK(m.T.kind() == SymTensor3::Kind::dense);
    double worst = 0.0;
    double scale = 0.0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        for (int k = 0; k < 5; ++k) {
          const double e = m.T.entry(i, j, k);
          scale = std::max(scale, std::abs(e));
          worst = std::max(worst, std::abs(e - m.T.entry(j, i, k)));
          worst = std::max(worst, std::abs(e - m.T.entry(k, j, i)));
          worst = std::max(worst, std::abs(e - m.T.entry(i, k, j)));
        }
    CHECK(worst <= 1e-15 * (1.0 + scale));
  }
  SUBCASE("ill-conditioned hessian diagonal spans the stated range") {
    QuarticModel m =
        ar3::generate(ar3::standard_spec(SetKind::ill_hessian, 50, 5));
    Vector d = m.H.diagonal();
    CHECK(d.minCoeff() >= 1e-6);
    CHECK(d.maxCoeff() <= 1e3);
  }
  SUBCASE("ill tensor uses the larger regularization weight") {
    QuarticModel m =
        ar3::generate(ar3::standard_spec(SetKind::ill_tensor, 10, 5));
    CHECK(m.sigma == 500.0);
    CHECK(m.T.kind() == SymTensor3::Kind::diagonal);
  }
}

TEST_CASE("brute force oracle on pinned instances") {
  SUBCASE("univariate cubic") {
    Vector t(1);
    t << -6.0;
    QuarticModel m{0.0, Vector::Zero(1), Matrix::Zero(1, 1),
                   SymTensor3::diagonal(t), 3.0, Metric::identity(1)};
    ar3::OracleResult o = ar3::brute_force_min(m);
    CHECK(o.s_star[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(o.value == doctest::Approx(-0.25).epsilon(1e-12));
  }
  SUBCASE("univariate quadratic with quartic term") {
    Vector g(1);
    g << -1.0;
    QuarticModel m{0.0, g, Matrix::Identity(1, 1), SymTensor3::zero(1), 1.0,
                   Metric::identity(1)};
    ar3::OracleResult o = ar3::brute_force_min(m);
    CHECK(o.s_star[0] == doctest::Approx(0.682328).epsilon(1e-6));
  }
  SUBCASE("convex with zero gradient stays home") {
    QuarticModel m{3.5, Vector::Zero(2), Matrix::Identity(2, 2),
                   SymTensor3::zero(2), 2.0, Metric::identity(2)};
    ar3::OracleResult o = ar3::brute_force_min(m);
    CHECK(o.s_star.norm() <= 1e-10);
    CHECK(o.value == doctest::Approx(3.5));
  }
  SUBCASE("reported value re-evaluates and never exceeds the origin") {
    Rng rng(91);
    for (int i = 0; i < 12; ++i) {
      QuarticModel m = support::random_model(rng, 1 + i % 3, i, false);
      ar3::OracleResult o = ar3::brute_force_min(m);
      CHECK(std::abs(ar3::value(m, o.s_star) - o.value) <=
            1e-12 * (1.0 + std::abs(o.value)));
      CHECK(o.value <= m.f0 + 1e-12 * (1.0 + std::abs(m.f0)));
    }
  }
}

TEST_CASE("trial seeds are shared across parameter overrides") {
  const std::uint64_t s1 = ar3::trial_seed(42, 10, 0);
  const std::uint64_t s2 = ar3::trial_seed(42, 10, 1);
  const std::uint64_t s3 = ar3::trial_seed(42, 20, 0);
  CHECK(s1 != s2);
  CHECK(s1 != s3);
  CHECK(ar3::trial_seed(42, 10, 0) == s1);

  GenSpec a = ar3::standard_spec(SetKind::diagonal, 6, s1);
  GenSpec b = ar3::standard_spec(SetKind::diagonal, 6, s1);
  b.sigma = 777.0;  // swept parameter must not change the draw
  QuarticModel ma = ar3::generate(a);
  QuarticModel mb = ar3::generate(b);
  CHECK((ma.g - mb.g).norm() == 0.0);
  CHECK((ma.H - mb.H).norm() == 0.0);
  CHECK(mb.sigma == 777.0);
}

TEST_CASE("csv schema") {
  const std::string header = ar3::csv_header();
  CHECK(comma_count(header) == 17);
  CHECK(header.rfind("solver,set,n,seed,trial,", 0) == 0);
  CHECK(header.find("safeguards") != std::string::npos);

  ar3::TrialRow row;
  row.solver = "dtm";
  row.set = "diagonal";
  row.n = 5;
  row.seed = 99;
  row.trial = 3;
  row.final_value = -1.25;
  row.first_order_ok = true;
  const std::string line = ar3::csv_row(row);
  CHECK(comma_count(line) == 17);
  CHECK(line.rfind("dtm,diagonal,5,99,3,", 0) == 0);
  CHECK(line.find(",1,") != std::string::npos);  // bool rendered as 0/1
}

TEST_CASE("bench run produces rows and a csv file") {
  ar3::BenchOptions opt;
  opt.set = SetKind::diagonal;
  opt.ns = {5};
  opt.trials = 2;
  opt.seed = 7;
  opt.tol = 1e-5;
  opt.csv_path = "bench_smoke.csv";
  std::ostringstream log;
  ar3::BenchResult res = ar3::run_bench(opt, &log);
  REQUIRE(res.rows.size() == 2);
  for (const auto& r : res.rows) {
    CHECK(r.solver == "dtm");
    CHECK(r.n == 5);
    CHECK(r.grad_norm <= opt.tol);
    CHECK(r.iters_success == 1);
    CHECK(r.fevals == 1);
    CHECK(r.devals == 1);
    CHECK(r.cpu_ms >= 0.0);
    CHECK(r.first_order_ok);
  }
  CHECK(res.rows[0].seed != res.rows[1].seed);
  CHECK(log.str().find("n=5") != std::string::npos);

  std::ifstream in("bench_smoke.csv");
  REQUIRE(in.good());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CHECK(comma_count(line) == 17);
    ++lines;
  }
  CHECK(lines == 3);  // header + 2 rows
  in.close();
  std::remove("bench_smoke.csv");
}

TEST_CASE("arc solver rows carry its counters") {
  ar3::BenchOptions opt;
  opt.solver = "arc";
  opt.set = SetKind::diagonal;
  opt.ns = {4};
  opt.trials = 1;
  opt.seed = 3;
  opt.tol = 1e-5;
  ar3::BenchResult res = ar3::run_bench(opt, nullptr);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0].solver == "arc");
  CHECK(res.rows[0].grad_norm <= opt.tol);
  CHECK(res.rows[0].iters_total >= res.rows[0].iters_success);
  CHECK(res.rows[0].chol_count >= 1);
}

TEST_CASE("sweep fractions are well formed and use common instances") {
  ar3::SweepOptions sw;
  sw.base.set = SetKind::diagonal;
  sw.base.ns = {6};
  sw.base.trials = 4;
  sw.base.seed = 11;
  sw.base.tol = 1e-5;
  sw.param = "sigma";
  sw.from = 60.0;
  sw.to = 240.0;
  sw.steps = 3;
  std::ostringstream log;
  std::vector<ar3::SweepPoint> pts = ar3::run_sweep(sw, &log);
  REQUIRE(pts.size() == 3);
  CHECK(pts.front().value == doctest::Approx(60.0));
  CHECK(pts.back().value == doctest::Approx(240.0));
  for (const auto& p : pts) {
    CHECK(p.trials == 4);
    CHECK(p.sufficient_fraction >= 0.0);
    CHECK(p.sufficient_fraction <= 1.0);
    CHECK(p.necessary_fraction >= p.sufficient_fraction);  // nested certificates
    CHECK(p.necessary_fraction <= 1.0);
  }
  CHECK(log.str().find("sweep") != std::string::npos);

  ar3::SweepOptions bad = sw;
  bad.param = "rank";
  CHECK_THROWS(ar3::run_sweep(bad, nullptr));
}

TEST_CASE("model json round trip") {
  Rng rng(93);
  for (int kind_sel = 0; kind_sel < 4; ++kind_sel) {
    QuarticModel m = support::random_model(rng, 4, kind_sel, kind_sel % 2 == 1);
    QuarticModel back = ar3::model_from_json(ar3::to_json(m));
    CHECK(back.f0 == m.f0);
    CHECK((back.g - m.g).norm() == 0.0);
    CHECK((back.H - m.H).norm() == 0.0);
    CHECK(back.sigma == m.sigma);
    CHECK((back.W.matrix() - m.W.matrix()).norm() == 0.0);
    CHECK(back.T.kind() == m.T.kind());
    Vector u = rng.normal_vector(4);
    CHECK(std::abs(support::tensor_apply3(back.T, u, u, u) -
                   support::tensor_apply3(m.T, u, u, u)) <= 1e-12);
  }
}

TEST_CASE("separable model and point json round trips") {
  ar3::SqrModel m;
  m.f0 = 1.5;
  m.g = Vector::LinSpaced(3, -1.0, 1.0);
  m.H = Matrix::Identity(3, 3);
  m.t = Vector::LinSpaced(3, -6.0, 6.0);
  m.sig = Vector::Constant(3, 3.0);
  ar3::SqrModel back = ar3::sqr_from_json(ar3::to_json(m));
  CHECK((back.g - m.g).norm() == 0.0);
  CHECK((back.t - m.t).norm() == 0.0);
  CHECK((back.sig - m.sig).norm() == 0.0);

  Vector s(3);
  s << 0.5, -1.25, 2.0;
  CHECK((ar3::point_from_json(ar3::point_to_json(s)) - s).norm() == 0.0);
  CHECK(ar3::point_from_json("[1.0, 2.0]").size() == 2);
  CHECK(ar3::point_from_json("{\"s\": [3.0]}")[0] == 3.0);
}

TEST_CASE("report json carries the certificate fields") {
  Vector t(1);
  t << -6.0;
  QuarticModel m{0.0, Vector::Zero(1), Matrix::Zero(1, 1),
                 SymTensor3::diagonal(t), 3.0, Metric::identity(1)};
  Vector s = Vector::Ones(1);
  ar3::OptimalityReport rep = ar3::classify(m, s, 1e-6);
  const std::string j = ar3::to_json(rep);
  for (const char* key :
       {"first_order_ok", "local2_ok", "necessary_ok", "sufficient_ok",
        "first_order_residual", "necessary_min_eig", "sufficient_min_eig"}) {
    CHECK(j.find(key) != std::string::npos);
  }
}
