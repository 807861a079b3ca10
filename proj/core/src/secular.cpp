#include "ar3/secular.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace ar3 {

namespace {
// Relative consistency required between lambda and sigma ||s||_W^2 before the
// inner iteration is accepted. Tighter than the 1e-6 result contract because
// the gap propagates into the model gradient through ||Ws|| (and through the
// basis norm for transformed subproblems); Newton converges quadratically, so
// the extra digits cost at most one more step.
constexpr double kLambdaConsistencyRel = 1e-11;
// Indefiniteness threshold on the pencil's smallest eigenvalue.
constexpr double kIndefiniteTol = 1e-12;
}  // namespace

bool is_safeguard(SecularStatus s) { return s != SecularStatus::converged; }

const char* to_string(SecularStatus s) {
  switch (s) {
    case SecularStatus::converged: return "converged";
    case SecularStatus::cholesky_failure: return "cholesky_failure";
    case SecularStatus::max_newton_iterations: return "max_newton_iterations";
    case SecularStatus::max_outer_iterations: return "max_outer_iterations";
    case SecularStatus::degenerate_g: return "degenerate_g";
    case SecularStatus::hard_case: return "hard_case";
  }
  return "unknown";
}

void SecularConfig::validate() const {
  if (!(eps_l > eps_kappa && eps_kappa > 0.0))
    throw std::invalid_argument("SecularConfig: need eps_l > eps_kappa > 0");
  if (l_max < 1 || kappa_max < 1)
    throw std::invalid_argument("SecularConfig: iteration caps must be >= 1");
  if (!(lambda_offset > 0.0))
    throw std::invalid_argument("SecularConfig: lambda_offset must be positive");
}

NewtonStep newton_update(const Matrix& h_eff, const Vector& g, const Metric& w,
                         double sigma, double lambda) {
  if (h_eff.rows() != h_eff.cols() || h_eff.rows() != g.size() || w.dim() != g.size())
    throw std::invalid_argument("newton_update: dimension mismatch");
  if (g.isZero(0.0)) throw std::invalid_argument("newton_update: g must be nonzero");
  if (!(lambda > 0.0)) throw std::invalid_argument("newton_update: lambda must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("newton_update: sigma must be positive");

  NewtonStep out;
  Matrix shifted = symmetrize(h_eff);
  if (w.is_identity())
    shifted.diagonal().array() += lambda;
  else
    shifted += lambda * w.matrix();
  Eigen::LLT<Matrix> llt(shifted);
  if (llt.info() != Eigen::Success) return out;  // cholesky_ok stays false

  out.cholesky_ok = true;
  out.s = llt.solve(-g);
  out.omega = llt.matrixL().solve(w.apply(out.s));
  const double r = w.norm(out.s);
  out.phi = 1.0 / r - std::sqrt(sigma / lambda);
  const double dphi =
      out.omega.squaredNorm() / (r * r * r) + 0.5 * std::sqrt(sigma) * std::pow(lambda, -1.5);
  out.delta_lambda = -out.phi / dphi;
  return out;
}

SecularResult secular_solve(const Matrix& h, const Vector& g, const SymTensor3& t,
                            double sigma, const Metric& w, const SecularConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(g.size());
  if (h.rows() != n || h.cols() != n || t.dim() != n || w.dim() != n)
    throw std::invalid_argument("secular_solve: dimension mismatch");
  if (!(sigma > 0.0)) throw std::invalid_argument("secular_solve: sigma must be positive");

  SecularResult res;
  res.s = Vector::Zero(n);

  const double gnorm = g.norm();

  // Pencil analysis at the start point (Gamma = 0): initializer, degenerate-g
  // guard, and hard-case probe share one decomposition.
  const GenEig ge = generalized_eig(h, w);
  const double mu_min = ge.eigenvalues[0];
  const double mu_scale =
      1.0 + std::max(std::abs(ge.eigenvalues[0]), std::abs(ge.eigenvalues[n - 1]));
  const bool indefinite = mu_min < -kIndefiniteTol * mu_scale;

  if (gnorm <= cfg.eps_kappa && !indefinite) {
    // s = 0 already satisfies the system with lambda = 0.
    res.lambda = 0.0;
    res.residual = gnorm;
    res.status = SecularStatus::converged;
    return res;
  }
  if (gnorm < 1e2 * cfg.eps_kappa && indefinite) {
    res.status = SecularStatus::degenerate_g;
    return res;
  }
  if (indefinite && std::abs(ge.vectors.col(0).dot(g)) < 1e-10 * gnorm) {
    res.status = SecularStatus::hard_case;
    return res;
  }

  double lambda = std::max(-mu_min, 0.0) + cfg.lambda_offset;
  Matrix h_eff = symmetrize(h);  // H + 1/2 Gamma, Gamma = 0 initially

  for (int kappa = 0;; ++kappa) {
    res.residual = (h_eff * res.s + lambda * w.apply(res.s) + g).norm();
    res.lambda = lambda;
    if (res.residual <= cfg.eps_kappa) {
      res.status = SecularStatus::converged;
      return res;
    }
    if (kappa == cfg.kappa_max) {
      res.status = SecularStatus::max_outer_iterations;
      return res;
    }

    // One mid-round lambda correction is allowed per outer round: a failed
    // factorization recomputes the pencil shift instead of aborting outright.
    bool corrected = false;
    Vector s_inner;
    for (int l = 0;; ) {
      ++res.counters.cholesky_count;
      NewtonStep step = newton_update(h_eff, g, w, sigma, lambda);
      if (!step.cholesky_ok) {
        if (corrected) {
          res.status = SecularStatus::cholesky_failure;
          return res;
        }
        const GenEig pencil = generalized_eig(h_eff, w);
        const double pmin = pencil.eigenvalues[0];
        const double pscale = 1.0 + std::max(std::abs(pencil.eigenvalues[0]),
                                             std::abs(pencil.eigenvalues[n - 1]));
        if (pmin < -kIndefiniteTol * pscale &&
            std::abs(pencil.vectors.col(0).dot(g)) < 1e-10 * gnorm) {
          res.status = SecularStatus::hard_case;
          return res;
        }
        lambda = std::max({lambda, -pmin, 0.0}) + cfg.lambda_offset;
        corrected = true;
        continue;
      }
      const double r = w.norm(step.s);
      const double gap = std::abs(lambda - sigma * r * r);
      if (std::abs(step.phi) < cfg.eps_l &&
          gap <= kLambdaConsistencyRel * std::max(1.0, lambda)) {
        s_inner = step.s;
        break;
      }
      if (l >= cfg.l_max) {
        res.status = SecularStatus::max_newton_iterations;
        return res;
      }
      double next = lambda + step.delta_lambda;
      // Keep lambda positive and forbid collapsing by more than half per step;
      // a factorization failure after an over-eager decrease bounces to the
      // correction above.
      next = std::max(next, 0.5 * lambda);
      next = std::max(next, 1e-200);
      lambda = next;
      ++l;
      ++res.counters.newton_steps;
    }

    res.s = s_inner;
    h_eff = symmetrize(h) + 0.5 * t.contract1(res.s);
    ++res.counters.outer_loops;
  }
}

}  // namespace ar3
