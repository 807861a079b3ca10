#pragma once

#include <functional>

#include "ar3/model.hpp"
#include "ar3/types.hpp"

namespace ar3 {

// Objective callback: derivatives of f at x up to the requested order
// (0 value, 1 +gradient, 2 +hessian).
using ArcObjective = std::function<Derivatives(const Vector&, int upto)>;

struct ArcConfig {
  double sigma0 = 1.0;      // initial cubic regularization weight
  double eta_very = 0.9;    // ratio for very successful steps (weight shrinks)
  double eta_ok = 0.1;      // acceptance ratio
  double grow = 2.0;
  double shrink = 0.5;
  double sigma_min = 1e-8;  // weight floor
  double tol = 1e-6;        // gradient norm target
  int max_iters = 500;

  void validate() const;
};

struct ArcResult {
  Vector x;
  double value = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
  int iterations = 0;        // total iterations (accepted + rejected)
  int accepted = 0;
  long function_evals = 0;   // trial value evaluations
  long derivative_evals = 0; // full derivative rounds
  long cholesky_count = 0;
};

// Cubic-regularized Newton baseline: at each iterate minimizes
//   g'p + 1/2 p'Hp + sigma_c/3 ||p||^3
// exactly via the shifted-system secular iteration in lambda = sigma_c ||p||
// (with a bisection bracket and the boundary-eigenvector fix in the hard
// case), then applies the usual acceptance / weight-update rules. Used as the
// safeguard target and as a comparison baseline; first-order method.
ArcResult arc_minimize(const ArcObjective& objective, const Vector& x0,
                       const ArcConfig& cfg = {});

// Convenience adapter for minimizing a quartic model directly.
ArcResult arc_minimize_model(const QuarticModel& m, const Vector& x0,
                             const ArcConfig& cfg = {});

}  // namespace ar3
