#include "ar3/arc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace ar3 {

void ArcConfig::validate() const {
  if (!(sigma0 > 0.0) || !(sigma_min > 0.0))
    throw std::invalid_argument("ArcConfig: weights must be positive");
  if (!(eta_very > eta_ok && eta_ok > 0.0))
    throw std::invalid_argument("ArcConfig: need eta_very > eta_ok > 0");
  if (!(grow > 1.0) || !(shrink > 0.0) || !(shrink < 1.0))
    throw std::invalid_argument("ArcConfig: need grow > 1 > shrink > 0");
  if (!(tol > 0.0) || max_iters < 1)
    throw std::invalid_argument("ArcConfig: bad tolerance or iteration cap");
}

namespace {

// Exact minimizer of g'p + 1/2 p'Hp + sigma_c/3 ||p||^3 via the secular
// equation 1/||p(lambda)|| = sigma_c/lambda on (H + lambda I)p = -g.
// The same factor-solve-omega kernel as the quartic secular iteration, with
// K(lambda) = lambda/sigma_c in place of sqrt(lambda/sigma).
Vector cubic_subproblem(const Matrix& h, const Vector& g, double sigma_c,
                        long* cholesky_count) {
  const int n = static_cast<int>(g.size());
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(h));
  const double eig_min = es.eigenvalues().minCoeff();
  const double lambda_lo = std::max(0.0, -eig_min);
  const double scale = 1.0 + std::abs(es.eigenvalues().cwiseAbs().maxCoeff());

  auto solve_at = [&](double lambda, Vector& p) -> bool {
    Matrix shifted = symmetrize(h);
    shifted.diagonal().array() += lambda;
    Eigen::LLT<Matrix> llt(shifted);
    ++*cholesky_count;
    if (llt.info() != Eigen::Success) return false;
    p = llt.solve(-g);
    return true;
  };

  const double gnorm = g.norm();
  const Vector u1 = es.eigenvectors().col(0);

  if (gnorm == 0.0) {
    if (lambda_lo == 0.0) return Vector::Zero(n);
    // Stationary start with negative curvature: step to the model minimizer
    // along the eigenvector, ||p|| = lambda_lo / sigma_c.
    return (lambda_lo / sigma_c) * u1;
  }

  // Hard case: g orthogonal to the bottom eigenspace and the interior
  // solution at the pole is too short. Complete with a boundary component.
  if (lambda_lo > 0.0 && std::abs(u1.dot(g)) < 1e-12 * gnorm) {
    Vector p_hat;
    const double bump = lambda_lo + 1e-10 * scale;
    if (solve_at(bump, p_hat) && p_hat.norm() < lambda_lo / sigma_c) {
      const double target = lambda_lo / sigma_c;
      const double b = u1.dot(p_hat);
      const double disc = b * b + target * target - p_hat.squaredNorm();
      const double tau = -b + std::sqrt(std::max(disc, 0.0));
      return p_hat + tau * u1;
    }
  }

  // Bracket the root of phi(lambda) = 1/||p(lambda)|| - sigma_c/lambda.
  double lo = lambda_lo;
  double hi = std::max(lambda_lo * 2.0, lambda_lo + std::sqrt(sigma_c * gnorm) + 1.0);
  Vector p;
  for (int grow = 0; grow < 200; ++grow) {
    if (!solve_at(hi, p)) {
      hi = 2.0 * hi + scale;
      continue;
    }
    if (1.0 / p.norm() - sigma_c / hi >= 0.0) break;
    lo = hi;
    hi *= 2.0;
  }

  if (p.size() == 0) return Vector::Zero(n);

  double lambda = 0.5 * (lo + hi);
  if (lambda <= lambda_lo) lambda = hi;
  Vector best = p;
  for (int it = 0; it < 200; ++it) {
    if (!solve_at(lambda, p)) {
      lo = std::max(lo, lambda);
      lambda = 0.5 * (lo + hi);
      continue;
    }
    const double pnorm = p.norm();
    best = p;
    const double gap = std::abs(lambda - sigma_c * pnorm);
    if (gap <= 1e-11 * std::max(1.0, lambda)) break;
    const double phi = 1.0 / pnorm - sigma_c / lambda;
    if (phi > 0.0)
      hi = lambda;
    else
      lo = lambda;
    Matrix shifted = symmetrize(h);
    shifted.diagonal().array() += lambda;
    Eigen::LLT<Matrix> llt(shifted);  // fresh factor for omega
    ++*cholesky_count;
    const Vector omega = llt.matrixL().solve(p);
    const double dphi = omega.squaredNorm() / (pnorm * pnorm * pnorm) + sigma_c / (lambda * lambda);
    double next = lambda - phi / dphi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    lambda = next;
  }
  return best;
}

}  // namespace

ArcResult arc_minimize(const ArcObjective& objective, const Vector& x0,
                       const ArcConfig& cfg) {
  cfg.validate();
  ArcResult res;
  res.x = x0;
  double sigma_c = cfg.sigma0;

  Derivatives d = objective(res.x, 2);
  ++res.derivative_evals;

  for (int it = 0; it < cfg.max_iters; ++it) {
    res.grad_norm = d.gradient.norm();
    res.value = d.value;
    if (res.grad_norm <= cfg.tol) {
      res.converged = true;
      res.iterations = it;
      return res;
    }
    res.iterations = it + 1;

    const Vector p = cubic_subproblem(d.hessian, d.gradient, sigma_c, &res.cholesky_count);
    const double pnorm = p.norm();
    const double model =
        d.value + d.gradient.dot(p) + 0.5 * p.dot(d.hessian * p) + sigma_c / 3.0 * pnorm * pnorm * pnorm;
    const double trial = objective(res.x + p, 0).value;
    ++res.function_evals;

    // Once the predicted decrease sinks to rounding level of f, the ratio is
    // noise; accept any non-increasing step so the iterate can keep polishing
    // the gradient instead of inflating sigma forever.
    const double denom = d.value - model;
    const double noise =
        1e2 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(d.value));
    const double rho = denom > noise ? (d.value - trial) / denom
                                     : (trial <= d.value + noise ? 1.0 : -1.0);
    if (rho >= cfg.eta_ok) {
      res.x += p;
      d = objective(res.x, 2);
      ++res.derivative_evals;
      ++res.accepted;
      if (rho >= cfg.eta_very) sigma_c = std::max(cfg.sigma_min, cfg.shrink * sigma_c);
    } else {
      sigma_c *= cfg.grow;
    }
  }
  res.grad_norm = d.gradient.norm();
  res.value = d.value;
  res.converged = res.grad_norm <= cfg.tol;
  return res;
}

ArcResult arc_minimize_model(const QuarticModel& m, const Vector& x0, const ArcConfig& cfg) {
  return arc_minimize([&m](const Vector& x, int upto) { return evaluate(m, x, upto); }, x0,
                      cfg);
}

}  // namespace ar3
