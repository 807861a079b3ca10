#include "ar3/testsets.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ar3/rng.hpp"

namespace ar3 {

SetKind set_kind_from_string(const std::string& name) {
  if (name == "diagonal") return SetKind::diagonal;
  if (name == "lowrank") return SetKind::lowrank;
  if (name == "full") return SetKind::full;
  if (name == "ill_hessian") return SetKind::ill_hessian;
  if (name == "ill_tensor") return SetKind::ill_tensor;
  throw std::invalid_argument("unknown test set: " + name);
}

const char* to_string(SetKind k) {
  switch (k) {
    case SetKind::diagonal: return "diagonal";
    case SetKind::lowrank: return "lowrank";
    case SetKind::full: return "full";
    case SetKind::ill_hessian: return "ill_hessian";
    case SetKind::ill_tensor: return "ill_tensor";
  }
  return "?";
}

void GenSpec::validate() const {
  if (n < 1) throw std::invalid_argument("gen: n >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("gen: sigma > 0");
  if (kind == SetKind::lowrank && (rank < 1 || rank > n))
    throw std::invalid_argument("gen: 1 <= rank <= n");
}

GenSpec standard_spec(SetKind kind, int n, std::uint64_t seed, int rank) {
  GenSpec s;
  s.kind = kind;
  s.n = n;
  s.seed = seed;
  s.rank = rank;
  switch (kind) {
    case SetKind::diagonal:
    case SetKind::lowrank:
      break;  // a=10 b=20 c=20 sigma=100
    case SetKind::full:
      s.a = 80.0;
      s.b = 80.0;
      s.c = 80.0;
      break;
    case SetKind::ill_hessian:
      s.a = 10.0;
      s.c = 20.0;
      break;
    case SetKind::ill_tensor:
      s.a = 10.0;
      s.b = 20.0;
      s.sigma = 500.0;
      break;
  }
  return s;
}

QuarticModel generate(const GenSpec& spec) {
  spec.validate();
  const int n = spec.n;
  Rng rng(spec.seed);

  Vector g = spec.a * rng.normal_vector(n);

  Matrix h;
  if (spec.kind == SetKind::ill_hessian) {
    h = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) h(i, i) = rng.uniform(1e-6, 1e3);
  } else {
    h = spec.b * symmetrize(rng.normal_matrix(n, n));
  }

  SymTensor3 t = SymTensor3::zero(n);
  switch (spec.kind) {
    case SetKind::diagonal:
    case SetKind::ill_hessian:
      t = SymTensor3::diagonal(spec.c * rng.normal_vector(n));
      break;
    case SetKind::ill_tensor: {
      Vector tt(n);
      for (int j = 0; j < n; ++j) tt[j] = rng.uniform(1e-6, 1e3);
      t = SymTensor3::diagonal(tt);
      break;
    }
    case SetKind::lowrank: {
      Matrix fac(n, spec.rank);
      for (int k = 0; k < spec.rank; ++k) fac.col(k) = spec.c * rng.normal_vector(n);
      t = SymTensor3::lowrank(fac);
      break;
    }
    case SetKind::full: {
      std::vector<double> entries(static_cast<std::size_t>(n) * n * n);
      for (auto& e : entries) e = spec.c * rng.normal();
      t = SymTensor3::dense(n, std::move(entries));
      break;
    }
  }

  QuarticModel m{0.0, std::move(g), std::move(h), std::move(t), spec.sigma,
                 Metric::identity(n)};
  m.validate();
  return m;
}

namespace {

// Levenberg-style damped Newton polish from a start point.
Vector refine(const QuarticModel& m, Vector s, int iters) {
  double val = value(m, s);
  const double gscale = 1.0 + std::abs(val);
  for (int it = 0; it < iters; ++it) {
    Derivatives d = evaluate(m, s, 2);
    const double gnorm = d.gradient.norm();
    if (gnorm <= 1e-13 * gscale) break;
    // Value differences drown in rounding once |f| is large; sub-noise steps
    // are judged by the gradient instead of a visible decrease.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * gscale;
    double mu = 0.0;
    bool moved = false;
    for (int tries = 0; tries < 60; ++tries) {
      Matrix h = d.hessian;
      if (mu > 0.0) h.diagonal().array() += mu;
      Eigen::LDLT<Matrix> ldlt(h);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        Vector cand = s - ldlt.solve(d.gradient);
        double cval = value(m, cand);
        const bool by_value = cval < val;
        const bool by_gradient =
            cval <= val + noise && gradient(m, cand).norm() < 0.9 * gnorm;
        if (by_value || by_gradient) {
          s = cand;
          val = std::min(val, cval);
          moved = true;
          break;
        }
      }
      mu = mu == 0.0 ? 1e-8 * (1.0 + d.hessian.norm()) : 4.0 * mu;
    }
    if (!moved) break;
  }
  return s;
}

}  // namespace

OracleResult brute_force_min(const QuarticModel& m, double radius, int grid,
                             int refinements) {
  const int n = m.dim();
  if (n > 3) throw std::invalid_argument("brute_force_min: n <= 3 only");
  if (grid < 3) throw std::invalid_argument("brute_force_min: grid >= 3");

  OracleResult out;
  out.method = "grid+multistart-newton";

  // Any global minimizer has m(s) <= m(0), which caps ||s||: the quartic term
  // (sigma/4) lambda_min(W)^2 r^4 outgrows |g| r + (||H||/2) r^2 + (T_fro/6) r^3
  // once r exceeds every one of the three ratios below. A local winner inside
  // a smaller box says nothing about minimizers beyond it.
  const double lam = m.W.lambda_min();
  const double dcoef = 0.25 * m.sigma * lam * lam;
  const double acoef = m.g.norm();
  const double bcoef = 0.5 * m.H.norm();
  const double ccoef = m.T.frobenius_bound() / 6.0;
  const double r_star =
      std::max({1.0, std::cbrt(3.0 * acoef / dcoef),
                std::sqrt(3.0 * bcoef / dcoef), 3.0 * ccoef / dcoef});

  double r = std::max(radius, r_star);
  for (int expand = 0; expand < 16; ++expand) {
    // Grid pass: keep the 10 best cells (origin always included).
    struct Cell {
      double val;
      Vector s;
    };
    std::vector<Cell> best;
    auto push = [&](double v, const Vector& s) {
      if (best.size() < 10) {
        best.push_back({v, s});
      } else {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < best.size(); ++i)
          if (best[i].val > best[worst].val) worst = i;
        if (v < best[worst].val) best[worst] = {v, s};
      }
    };

    push(value(m, Vector::Zero(n)), Vector::Zero(n));
    std::vector<int> idx(n, 0);
    Vector s(n);
    const int total = static_cast<int>(std::pow(grid, n));
    for (int flat = 0; flat < total; ++flat) {
      int rem = flat;
      for (int d = 0; d < n; ++d) {
        idx[d] = rem % grid;
        rem /= grid;
      }
      for (int d = 0; d < n; ++d)
        s[d] = -r + 2.0 * r * static_cast<double>(idx[d]) / (grid - 1);
      push(value(m, s), s);
    }

    Vector winner = best.front().s;
    double wval = best.front().val;
    double wgrad = gradient(m, winner).norm();
    for (const Cell& cell : best) {
      Vector polished = refine(m, cell.s, refinements);
      double pval = value(m, polished);
      double pgrad = gradient(m, polished).norm();
      // Deep basins evaluate to the same value up to rounding; candidates that
      // tie within that band are ranked by how stationary they are.
      const double tie =
          64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(wval));
      if (pval < wval - tie || (pval <= wval + tie && pgrad < wgrad)) {
        wval = std::min(wval, pval);
        wgrad = pgrad;
        winner = polished;
      }
    }

    if (winner.size() == 0 || winner.lpNorm<Eigen::Infinity>() < 0.95 * r) {
      out.s_star = winner;
      out.value = wval;
      out.radius = r;
      return out;
    }
    r *= 2.0;
  }
  throw std::runtime_error("brute_force_min: search box did not stabilize");
}

}  // namespace ar3
