#pragma once

#include "ar3/eig.hpp"
#include "ar3/metric.hpp"
#include "ar3/tensor.hpp"
#include "ar3/types.hpp"

namespace ar3 {

enum class SecularStatus {
  converged,
  cholesky_failure,
  max_newton_iterations,
  max_outer_iterations,
  degenerate_g,
  hard_case,
};

// Everything except converged asks the caller to fall back to a safeguard solver.
bool is_safeguard(SecularStatus s);
const char* to_string(SecularStatus s);

struct SecularConfig {
  double eps_l = 1e-7;       // inner Newton tolerance on the secular residual
  double eps_kappa = 1e-8;   // outer tolerance on ||(H + Gamma/2 + lambda W)s + g||
  int l_max = 100;           // Newton iteration cap per outer round
  int kappa_max = 50;        // outer (tensor refresh) cap
  double lambda_offset = 1e-8;  // strict-positivity margin added by corrections

  // Throws unless eps_l > eps_kappa > 0, caps >= 1, offset > 0.
  void validate() const;
};

// One factorize-and-solve step of the secular Newton iteration at fixed
// lambda > 0 on (H_eff + lambda W)s = -g, H_eff = H + 1/2 Gamma.
//
//   phi          phi_d(lambda) = ||s||_W^-1 - sqrt(sigma/lambda)
//   delta_lambda -phi_d / phi_d' with
//                phi_d' = ||omega||^2 ||s||_W^-3 + 1/2 sqrt(sigma) lambda^-3/2,
//                omega = L^-1 W s from H_eff + lambda W = L L'
//
// cholesky_ok is false (other fields empty) when the factorization fails.
// Throws on g = 0, lambda <= 0, sigma <= 0, or dimension mismatch.
struct NewtonStep {
  bool cholesky_ok = false;
  double phi = 0.0;
  double delta_lambda = 0.0;
  Vector s;
  Vector omega;
};

NewtonStep newton_update(const Matrix& h_eff, const Vector& g, const Metric& w,
                         double sigma, double lambda);

struct SecularCounters {
  int cholesky_count = 0;
  int newton_steps = 0;
  int outer_loops = 0;
};

struct SecularResult {
  Vector s;
  double lambda = 0.0;
  double residual = 0.0;  // ||(H + Gamma/2 + lambda W)s + g|| at exit
  SecularStatus status = SecularStatus::converged;
  SecularCounters counters;
};

// Global minimization of f(s) = g's + 1/2 s'Hs + 1/6 T[s]^3 + sigma/4 ||s||_W^4
// through the stationarity system
//   (H + 1/2 Gamma + lambda W)s = -g,  Gamma = T[s],  lambda = sigma ||s||_W^2,
// alternating a Newton iteration on the secular equation in lambda (Gamma
// frozen) with Gamma refreshes. Starts from s = 0 and
// lambda = max(-lambda_min pencil(H, W), 0) + lambda_offset. A lambda
// correction (minimal positive-semidefinite shift of the pencil, plus offset)
// runs whenever a factorization rejects the current lambda; the hard case
// (indefinite pencil with u_1' g = 0) and near-zero gradients with indefinite
// curvature are reported as safeguard statuses rather than solved.
SecularResult secular_solve(const Matrix& h, const Vector& g, const SymTensor3& t,
                            double sigma, const Metric& w,
                            const SecularConfig& cfg = {});

}  // namespace ar3
