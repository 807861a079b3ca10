#pragma once

#include "ar3/model.hpp"

namespace ar3 {

// B(s) = H + 1/2 T[s] + sigma ||s||_W^2 W (first-order: B(s*)s* = -g)
Matrix b_operator(const QuarticModel& m, const Vector& s);
// G(s) = H + T[s] + sigma ||s||_W^2 W (curvature core of the Hessian)
Matrix g_operator(const QuarticModel& m, const Vector& s);

// Certificate margins at a candidate point. Margins are signed: a condition
// holds when its margin is >= 0, and flags apply a relative tolerance
// -tol * (1 + ||H||_F).
//
//   first_order_residual  ||grad m(s)||
//   local2_min_eig        lambda_min of the full Hessian at s
//   necessary_min_eig     lambda_min of
//       H + 2/3 T[s] + sigma ||s||_W^2 W + Lambda_W/3 ||s||_W W
//   sufficient_min_eig    lambda_min of
//       H + 2/3 T[s] + sigma ||s||_W^2 W - Lambda_W/3 ||s||_W W - Lambda_W^2/(18 sigma) W
//
// The sufficient matrix is dominated by the necessary one, so
// sufficient_min_eig <= necessary_min_eig always.
struct OptimalityReport {
  double first_order_residual = 0.0;
  double local2_min_eig = 0.0;
  double necessary_min_eig = 0.0;
  double sufficient_min_eig = 0.0;
  double lambda_w_used = 0.0;
  double tol = 0.0;

  bool first_order_ok = false;
  bool local2_ok = false;
  bool necessary_ok = false;
  bool sufficient_ok = false;
};

OptimalityReport classify(const QuarticModel& m, const Vector& s, double tol);

// Separable-model certificates. The necessary margin is
// lambda_min(G^(s)) + 2 ||H_0||_1 where ||H_0||_1 sums |H_ij| off the
// diagonal; the sufficient margin is lambda_min(G^(s)). With diagonal H the
// two coincide. local2 uses H + diag(t_j s_j) + 3 diag(sig_j s_j^2).
OptimalityReport classify_sqr(const SqrModel& m, const Vector& s, double tol);

// Regularization-weight thresholds derived from the certificate theory.
// Each function throws std::invalid_argument when its precondition fails.

// 3 max{ -lambda_min(H) ||s||_W^-2 lambda_min(W)^-1, 7/3 Lambda_W ||s||_W^-1 }:
// at weights this large the necessary and sufficient certificates coincide
// at s. Requires s != 0.
double sigma_equivalence_at(const QuarticModel& m, const Vector& s);

// 2 max{ -lambda_min(H) max(s0^-2, 1), Lambda_W max(s0^-1, 1) }: weights above
// this make the model convex on { ||s||_W >= s0 }. Requires s0 > 0.
double sigma_convexify_outside(const QuarticModel& m, double s0);

// Lambda_W^2 / (4 delta) with delta = lambda_min(H): weights above this make
// the model convex everywhere. Requires delta > 0.
double sigma_convexify_locally_convex(const QuarticModel& m);

// max{ (3 lambda)^3 eps_t^-2, (7 Lambda_W)^{3/2} eps_t^{-1/2} } with
// lambda = max(0, -lambda_min(H)) / lambda_min(W): weights at least this
// large close the certificate gap at any first-order point whose gradient
// exceeds eps_t. Requires eps_t in (0, 1).
double sigma_eps_t_bound(const QuarticModel& m, double eps_t);

// 8 Lambda_3^2 / delta with Lambda_3 the tensor Frobenius bound: the
// sum-of-squares convexification threshold (unit radius). Exactly 32x
// sigma_convexify_locally_convex whenever lambda_w falls back to the
// Frobenius bound (lowrank and dense tensors with W = I).
double sigma_sos_bound(const QuarticModel& m);

// All thresholds that apply to m; fields that need an s (equivalence) or a
// positive-definite H (convexity bounds) are NaN when not computable.
struct SigmaThresholds {
  double equivalence_at_s;
  double convexify_outside;  // at the given s0
  double convexify_locally_convex;
  double eps_t_bound;
  double sos_bound;
};

SigmaThresholds sigma_thresholds(const QuarticModel& m, const Vector* s, double s0,
                                 double eps_t);

}  // namespace ar3
