#include "ar3/dtm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ar3/arc.hpp"
#include "ar3/rng.hpp"

namespace ar3 {

void DtmConfig::validate() const {
  if (!(eta > 0.0) || !(eta1 > eta)) throw std::invalid_argument("dtm: need 0 < eta < eta1");
  if (!(gamma2 > 0.0 && gamma2 < 1.0)) throw std::invalid_argument("dtm: gamma2 in (0,1)");
  if (!(gamma > 1.0)) throw std::invalid_argument("dtm: gamma > 1");
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("dtm: alpha in (0,1/2)");
  if (!(big_t > 0.0)) throw std::invalid_argument("dtm: big_t > 0");
  if (!(eps > 0.0)) throw std::invalid_argument("dtm: eps > 0");
  if (d0 < 0.0) throw std::invalid_argument("dtm: d0 >= 0");
  if (max_outer < 1) throw std::invalid_argument("dtm: max_outer >= 1");
  if (rule == DtmRule::lowrank && rank < 1) throw std::invalid_argument("dtm: rank >= 1");
  secular.validate();
}

QuarticModel BuiltModel::as_model(double f) const {
  QuarticModel m{f, g, h, SymTensor3::diagonal(t), sigma_d, w_eff};
  return m;
}

namespace {

// Raw dense-cube helpers for rank_approx. Entries are flattened row-major,
// index (i*n + j)*n + k.

Vector cube_contract2(const std::vector<double>& e, int n, const Vector& v) {
  Vector out = Vector::Zero(n);
  const double* p = e.data();
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double vj = v[j];
      const double* row = p + (static_cast<std::size_t>(i) * n + j) * n;
      double inner = 0.0;
      for (int k = 0; k < n; ++k) inner += row[k] * v[k];
      acc += vj * inner;
    }
    out[i] = acc;
  }
  return out;
}

double cube_fro(const std::vector<double>& e) {
  double s = 0.0;
  for (double x : e) s += x * x;
  return std::sqrt(s);
}

void cube_rank1_add(std::vector<double>& e, int n, const Vector& a, double sign) {
  double* p = e.data();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double aij = sign * a[i] * a[j];
      double* row = p + (static_cast<std::size_t>(i) * n + j) * n;
      for (int k = 0; k < n; ++k) row[k] += aij * a[k];
    }
}

struct PowerFit {
  double gamma = 0.0;  // T[u]^3 at the fitted unit direction
  Vector u;
  bool converged = false;
};

// Shifted symmetric power iteration climbing T[v]^3 on the unit sphere.
PowerFit power_climb(const std::vector<double>& e, int n, Vector v, double shift,
                     int max_iters) {
  PowerFit fit;
  double nv = v.norm();
  if (!(nv > 0.0)) return fit;
  v /= nv;
  Vector u = cube_contract2(e, n, v);
  double f = v.dot(u);
  for (int it = 0; it < max_iters; ++it) {
    Vector next = u + shift * v;
    double nn = next.norm();
    if (!(nn > 0.0)) break;
    v = next / nn;
    u = cube_contract2(e, n, v);
    double fn = v.dot(u);
    if (std::abs(fn - f) <= 1e-10 * std::max(1.0, std::abs(fn))) {
      fit.converged = true;
      f = fn;
      break;
    }
    f = fn;
  }
  fit.gamma = f;
  fit.u = v;
  return fit;
}

Matrix cube_contract1(const std::vector<double>& e, int n, const Vector& v) {
  Matrix out = Matrix::Zero(n, n);
  const double* p = e.data();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double* row = p + (static_cast<std::size_t>(i) * n + j) * n;
      double inner = 0.0;
      for (int k = 0; k < n; ++k) inner += row[k] * v[k];
      out(i, j) = inner;
    }
  return out;
}

// Newton polish of the tensor eigenpair T[v]^2 = gamma v on the unit sphere.
// The shifted power iteration converges only linearly (the safety shift
// dominates the update), so it parks some distance from the pair; a few
// bordered Newton steps finish the job. The result is kept only when gamma
// does not drop, preserving the residual-non-increasing guarantee.
void polish_eigenpair(const std::vector<double>& e, int n, PowerFit& fit) {
  if (fit.u.size() == 0) return;
  Vector v = fit.u;
  double gamma = fit.gamma;
  for (int it = 0; it < 8; ++it) {
    const Vector tv2 = cube_contract2(e, n, v);
    const Vector resid = tv2 - gamma * v;
    if (resid.norm() <= 1e-15 * std::max(1.0, std::abs(gamma))) break;
    Matrix jac(n + 1, n + 1);
    jac.topLeftCorner(n, n) = 2.0 * cube_contract1(e, n, v);
    jac.topLeftCorner(n, n).diagonal().array() -= gamma;
    jac.topRightCorner(n, 1) = -v;
    jac.bottomLeftCorner(1, n) = v.transpose();
    jac(n, n) = 0.0;
    Vector rhs(n + 1);
    rhs.head(n) = -resid;
    rhs[n] = 0.5 * (1.0 - v.squaredNorm());
    const Vector step = Eigen::PartialPivLU<Matrix>(jac).solve(rhs);
    if (!step.allFinite()) break;
    v += step.head(n);
    const double nv = v.norm();
    if (!(nv > 0.0)) return;
    v /= nv;
    gamma = v.dot(cube_contract2(e, n, v));
  }
  if (gamma >= fit.gamma) {
    fit.u = v;
    fit.gamma = gamma;
    fit.converged = true;
  }
}

// Best rank-1 fit of the residual cube: seeded random restarts, keep the
// largest T[u]^3 (the sign flip v -> -v makes the maximum nonnegative).
PowerFit best_rank1(const std::vector<double>& e, int n, Rng& rng, const Vector* warm,
                    int restarts) {
  const double shift = 2.0 * cube_fro(e);
  PowerFit best;
  if (warm != nullptr && warm->norm() > 0.0) {
    PowerFit fit = power_climb(e, n, *warm, shift, 500);
    if (fit.u.size() > 0 && fit.gamma > best.gamma) best = fit;
  }
  for (int r = 0; r < restarts; ++r) {
    Vector v0 = rng.normal_vector(n);
    PowerFit fit = power_climb(e, n, v0, shift, 500);
    if (fit.u.size() > 0 && fit.gamma > best.gamma) best = fit;
    if (fit.u.size() > 0 && fit.gamma >= best.gamma) best.converged = best.converged || fit.converged;
  }
  polish_eigenpair(e, n, best);
  return best;
}

Vector fit_to_factor(const PowerFit& fit, int n) {
  if (fit.u.size() == 0 || !(fit.gamma > 0.0)) return Vector::Zero(n);
  return std::cbrt(fit.gamma) * fit.u;
}

}  // namespace

RankApproxResult rank_approx(const SymTensor3& t, int p) {
  const int n = t.dim();
  if (p < 1 || p > n) throw std::invalid_argument("rank_approx: need 1 <= p <= n");

  std::vector<double> e;
  if (t.kind() == SymTensor3::Kind::dense) {
    e = t.entries();
  } else {
    e = t.densified().entries();
  }

  Rng rng(0x00c0ffee5eedull, static_cast<std::uint64_t>(p));

  RankApproxResult res;
  res.factors = Matrix::Zero(n, p);
  res.converged = true;

  const double exhausted_tol = 1e-13 * std::max(1.0, cube_fro(e));

  for (int k = 0; k < p; ++k) {
    PowerFit fit = best_rank1(e, n, rng, nullptr, 50);
    if (!(fit.gamma > exhausted_tol)) {
      // Residual has no usable rank-1 component; remaining factors stay zero.
      break;
    }
    if (!fit.converged) res.converged = false;
    Vector a = fit_to_factor(fit, n);
    res.factors.col(k) = a;
    cube_rank1_add(e, n, a, -1.0);
  }

  // Refinement sweeps: re-fit each factor against the residual of the others,
  // warm-started at its current direction. Residual is non-increasing.
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (int k = 0; k < p; ++k) {
      Vector a = res.factors.col(k);
      if (a.norm() == 0.0) continue;
      cube_rank1_add(e, n, a, 1.0);
      PowerFit fit = best_rank1(e, n, rng, &a, 8);
      Vector anew = fit_to_factor(fit, n);
      if (anew.norm() == 0.0) anew = a;  // keep the old factor on a failed refit
      res.factors.col(k) = anew;
      cube_rank1_add(e, n, anew, -1.0);
    }
  }

  res.residual_fro = cube_fro(e);
  return res;
}

Matrix orth_complement(const Matrix& c_hat) {
  const int p = static_cast<int>(c_hat.rows());
  const int n = static_cast<int>(c_hat.cols());
  if (p < 1 || p > n) throw std::invalid_argument("orth_complement: need 1 <= rows <= cols");

  Eigen::HouseholderQR<Matrix> qr(c_hat.transpose());
  Matrix r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  const double scale = std::max(1.0, c_hat.norm());
  for (int i = 0; i < p; ++i)
    if (std::abs(r(i, i)) <= 1e-10 * scale)
      throw std::invalid_argument("orth_complement: rank-deficient factor set");

  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - p).transpose();
}

namespace {

Vector clipped(Vector t, double big_t) {
  for (int j = 0; j < t.size(); ++j) t[j] = std::clamp(t[j], -big_t, big_t);
  return t;
}

// Magnitude of the gradient's terms before cancellation. At deep minimizers
// (|f| ~ 1e15 on the wide random sets) the evaluated gradient carries rounding
// noise of this scale times machine epsilon, so no absolute target below that
// is decidable; termination tests compare against it.
double gradient_noise_scale(const QuarticModel& m, const Vector& x) {
  const double w2 = m.W.norm2(x);
  return m.g.norm() + (m.H * x).norm() + 0.5 * m.T.contract2(x).norm() +
         m.sigma * w2 * m.W.apply(x).norm();
}

double effective_eps(const QuarticModel& m, const Vector& x, double eps) {
  constexpr double kNoiseMult = 16.0;
  return std::max(eps, kNoiseMult * std::numeric_limits<double>::epsilon() *
                           gradient_noise_scale(m, x));
}

BuiltModel build_diagonal(const QuarticModel& m, const IterateState& at, double d,
                          double big_t, bool fallback) {
  BuiltModel b;
  b.t = clipped(shifted_tensor_diagonal(m, at.p), big_t);
  b.g = at.g;
  b.h = at.h;
  b.sigma_d = m.sigma + d;
  b.w_eff = m.W;
  b.fallback_diagonal = fallback;
  return b;
}

}  // namespace

BuiltModel build_model(const QuarticModel& m, const IterateState& at, DtmRule rule,
                       int rank, double d, double big_t) {
  const int n = m.dim();
  if (rule == DtmRule::diagonal) return build_diagonal(m, at, d, big_t, false);

  if (rank < 1 || rank > n) throw std::invalid_argument("build_model: need 1 <= rank <= n");

  const bool at_origin = at.p.norm() == 0.0;
  Matrix fac;
  bool usable = true;
  if (at_origin && m.T.kind() == SymTensor3::Kind::lowrank && m.T.rank() == rank) {
    fac = m.T.factors();
  } else {
    const SymTensor3 ti = at_origin ? m.T : shift(m, at.p).T;
    RankApproxResult ra = rank_approx(ti, rank);
    fac = ra.factors;
    usable = ra.converged;
  }

  if (usable) {
    for (int k = 0; k < rank; ++k)
      if (fac.col(k).norm() == 0.0) usable = false;
  }

  if (usable) {
    try {
      Matrix c_hat = fac.transpose();  // rows are the factor directions
      Matrix c(n, n);
      c.topRows(rank) = c_hat;
      if (rank < n) c.bottomRows(n - rank) = orth_complement(c_hat);
      Matrix c_inv = c.inverse();

      BuiltModel b;
      b.has_basis = true;
      b.c = c;
      b.c_inv = c_inv;
      b.g = c_inv.transpose() * at.g;
      b.h = symmetrize(c_inv.transpose() * at.h * c_inv);
      b.w_eff = Metric(symmetrize(c_inv.transpose() * m.W.matrix() * c_inv));
      Vector t = Vector::Zero(n);
      t.head(rank).setOnes();
      b.t = clipped(t, big_t);
      b.sigma_d = m.sigma + d;
      return b;
    } catch (const std::exception&) {
      usable = false;
    }
  }

  return build_diagonal(m, at, d, big_t, true);
}

DtmResult dtm_minimize(const QuarticModel& m, const DtmConfig& cfg) {
  cfg.validate();
  m.validate();
  const int n = m.dim();

  DtmResult res;
  Vector p = Vector::Zero(n);
  Derivatives cur = evaluate(m, p, 2);
  res.trace.derivative_evals = 1;

  double d = cfg.d0;
  BuiltModel built;
  bool built_valid = false;

  for (int i = 0; i < cfg.max_outer; ++i) {
    if (cur.gradient.norm() <= effective_eps(m, p, cfg.eps)) {
      res.status = DtmStatusKind::converged;
      break;
    }

    const IterateState at{p, cur.value, cur.gradient, cur.hessian};
    if (!built_valid) {
      built = build_model(m, at, cfg.rule, cfg.rank, d, cfg.big_t);
      built_valid = true;
    } else {
      built.sigma_d = m.sigma + d;
    }

    DtmIterRecord rec;
    rec.index = i;
    rec.d = d;
    rec.sigma_d = built.sigma_d;
    rec.h_scale = 1.0 + built.h.norm();

    const SymTensor3 tdiag = SymTensor3::diagonal(built.t);
    SecularResult sec = secular_solve(built.h, built.g, tdiag, built.sigma_d,
                                      built.w_eff, cfg.secular);
    res.trace.cholesky_count += sec.counters.cholesky_count;
    rec.secular_status = to_string(sec.status);

    Vector stilde;
    Vector s_d;
    bool direct_step = false;
    bool secular_ok = !is_safeguard(sec.status);
    if (secular_ok) {
      stilde = sec.s;
      rec.secular_lambda = sec.lambda;
      rec.secular_residual = sec.residual;
    } else {
      ++res.trace.safeguards;
      rec.used_safeguard = true;
      const QuarticModel md = built.as_model(cur.value);
      ArcConfig acfg;
      // The terminal test reads the gradient in original coordinates, which is
      // C^T times the surrogate gradient; shrink the target accordingly so a
      // safeguarded step can still finish the outer iteration.
      acfg.tol = 0.5 * cfg.eps;
      if (built.has_basis) acfg.tol /= std::max(1.0, built.c.norm());
      acfg.max_iters = 300;
      const Vector warm = sec.s.size() > 0 ? sec.s : Vector::Zero(n);
      ArcResult ar = arc_minimize_model(md, warm, acfg);
      res.trace.cholesky_count += ar.cholesky_count;
      if (ar.converged) {
        stilde = ar.x;
      } else {
        // Last resort: cubic-regularized descent on the objective itself.
        ArcConfig a2cfg;
        a2cfg.tol = cfg.eps;
        a2cfg.max_iters = 300;
        ArcResult a2 = arc_minimize_model(m, p, a2cfg);
        res.trace.cholesky_count += a2.cholesky_count;
        res.trace.function_evals += a2.function_evals;
        res.trace.derivative_evals += a2.derivative_evals;
        s_d = a2.x - p;
        direct_step = true;
      }
    }

    if (!direct_step) {
      s_d = built.has_basis ? Vector(built.c_inv * stilde) : stilde;
    } else {
      stilde = built.has_basis ? Vector(built.c * s_d) : s_d;
    }

    const double r = m.W.norm(s_d);
    rec.step_norm = r;

    double beta = 0.0;
    if (r > 0.0) {
      for (int j = 0; j < n; ++j) {
        const double z = stilde[j] / r;
        beta += built.t[j] * z * z * z;
      }
    }
    rec.beta = beta;

    {
      const QuarticModel md = built.as_model(cur.value);
      Eigen::SelfAdjointEigenSolver<Matrix> es(hessian(md, stilde));
      rec.local2_min_eig = es.eigenvalues().minCoeff();
      if (secular_ok) rec.lambda_gap = std::abs(sec.lambda - built.sigma_d * r * r);
    }

    const Derivatives trial = evaluate(m, p + s_d, 1);
    ++res.trace.function_evals;
    ++res.trace.total;

    if (trial.gradient.norm() <= effective_eps(m, p + s_d, cfg.eps)) {
      rec.terminal = true;
      rec.tag = IterTag::successful;
      rec.decrease = cur.value - trial.value;
      rec.rho = 1.0;
      p += s_d;
      cur.value = trial.value;
      cur.gradient = trial.gradient;
      ++res.trace.successful;
      res.trace.iterations.push_back(rec);
      res.status = DtmStatusKind::converged;
      break;
    }

    const double md_val = value(built.as_model(cur.value), stilde);
    const double denom = cur.value - md_val;
    const double scale = std::max({std::abs(cur.value), std::abs(md_val), 1.0});
    const bool denom_ok = denom > 1e-14 * scale;
    const double rho = denom_ok ? (cur.value - trial.value) / denom
                                : -std::numeric_limits<double>::infinity();
    rec.rho = rho;

    bool accept = false;
    if (cfg.mode == DtmMode::practical) {
      if (denom_ok && rho >= cfg.eta1) {
        accept = true;
        rec.tag = IterTag::very_successful;
        d *= cfg.gamma2;
      } else if (denom_ok && rho >= cfg.eta) {
        accept = true;
        rec.tag = IterTag::successful;
      } else {
        rec.tag = IterTag::unsuccessful;
        d = d == 0.0 ? 1.0 : cfg.gamma * d;
      }
    } else {
      bool align_ok = false;
      if (r > 0.0) {
        const double thresh = (-beta + cfg.alpha) / r;
        const bool case1 = beta >= cfg.alpha;
        const bool case2 = beta <= -4.0 * cfg.alpha &&
                           !(built.sigma_d >= thresh / 6.0 &&
                             built.sigma_d <= 2.0 * thresh / 3.0);
        const bool case3 = beta >= -4.0 * cfg.alpha && beta <= cfg.alpha &&
                           built.sigma_d >= 2.0 * thresh / 3.0;
        align_ok = case1 || case2 || case3;
      }
      accept = denom_ok && rho >= cfg.eta && align_ok;
      if (accept) {
        rec.tag = rho >= cfg.eta1 ? IterTag::very_successful : IterTag::successful;
        d *= cfg.gamma2;
      } else {
        rec.tag = IterTag::unsuccessful;
        d = cfg.gamma * std::max(1.0, d);
      }
    }

    if (accept) {
      rec.decrease = cur.value - trial.value;
      p += s_d;
      cur.value = trial.value;
      cur.gradient = trial.gradient;
      cur.hessian = hessian(m, p);
      ++res.trace.derivative_evals;
      ++res.trace.successful;
      built_valid = false;
    }
    res.trace.iterations.push_back(rec);
  }

  res.s = p;
  res.value = cur.value;
  res.grad_norm = cur.gradient.norm();
  return res;
}

}  // namespace ar3
