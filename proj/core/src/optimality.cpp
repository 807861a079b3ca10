#include "ar3/optimality.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ar3 {

namespace {

double min_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double h_min_eig(const QuarticModel& m) { return min_eig(m.H); }

}  // namespace

Matrix b_operator(const QuarticModel& m, const Vector& s) {
  return m.H + 0.5 * m.T.contract1(s) + m.sigma * m.W.norm2(s) * m.W.matrix();
}

Matrix g_operator(const QuarticModel& m, const Vector& s) {
  return m.H + m.T.contract1(s) + m.sigma * m.W.norm2(s) * m.W.matrix();
}

OptimalityReport classify(const QuarticModel& m, const Vector& s, double tol) {
  if (s.size() != m.dim()) throw std::invalid_argument("classify: dimension mismatch");
  if (!(tol >= 0.0)) throw std::invalid_argument("classify: tol must be nonnegative");

  OptimalityReport r;
  r.tol = tol;
  r.lambda_w_used = lambda_w(m.T, m.W);

  r.first_order_residual = gradient(m, s).norm();
  r.local2_min_eig = min_eig(hessian(m, s));

  const double snorm = m.W.norm(s);
  const Matrix& wmat = m.W.matrix();
  const Matrix common = m.H + (2.0 / 3.0) * m.T.contract1(s) + m.sigma * snorm * snorm * wmat;
  r.necessary_min_eig = min_eig(common + (r.lambda_w_used / 3.0) * snorm * wmat);
  r.sufficient_min_eig =
      min_eig(common - (r.lambda_w_used / 3.0) * snorm * wmat -
              (r.lambda_w_used * r.lambda_w_used / (18.0 * m.sigma)) * wmat);

  const double slack = tol * (1.0 + m.H.norm());
  r.first_order_ok = r.first_order_residual <= slack;
  r.local2_ok = r.local2_min_eig >= -slack;
  r.necessary_ok = r.necessary_min_eig >= -slack;
  r.sufficient_ok = r.sufficient_min_eig >= -slack;
  return r;
}

OptimalityReport classify_sqr(const SqrModel& m, const Vector& s, double tol) {
  if (s.size() != m.dim()) throw std::invalid_argument("classify_sqr: dimension mismatch");
  if (!(tol >= 0.0)) throw std::invalid_argument("classify_sqr: tol must be nonnegative");

  OptimalityReport r;
  r.tol = tol;
  r.lambda_w_used = m.t.cwiseAbs().maxCoeff();

  r.first_order_residual = sqr_gradient(m, s).norm();
  Matrix local2 = m.H;
  local2.diagonal() +=
      m.t.cwiseProduct(s) + 3.0 * m.sig.cwiseProduct(s.cwiseProduct(s));
  r.local2_min_eig = min_eig(local2);

  // ||H_0||_1: total off-diagonal mass of H.
  double offdiag = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j)
      if (i != j) offdiag += std::abs(m.H(i, j));

  const double ghat_min = min_eig(sqr_g_operator(m, s));
  r.sufficient_min_eig = ghat_min;
  r.necessary_min_eig = ghat_min + 2.0 * offdiag;

  const double slack = tol * (1.0 + m.H.norm());
  r.first_order_ok = r.first_order_residual <= slack;
  r.local2_ok = r.local2_min_eig >= -slack;
  r.necessary_ok = r.necessary_min_eig >= -slack;
  r.sufficient_ok = r.sufficient_min_eig >= -slack;
  return r;
}

double sigma_equivalence_at(const QuarticModel& m, const Vector& s) {
  if (s.size() != m.dim())
    throw std::invalid_argument("sigma_equivalence_at: dimension mismatch");
  const double snorm = m.W.norm(s);
  if (snorm == 0.0) throw std::invalid_argument("sigma_equivalence_at: s must be nonzero");
  const double lw = lambda_w(m.T, m.W);
  const double a = -h_min_eig(m) / (snorm * snorm * m.W.lambda_min());
  const double b = (7.0 / 3.0) * lw / snorm;
  return 3.0 * std::max(a, b);
}

double sigma_convexify_outside(const QuarticModel& m, double s0) {
  if (!(s0 > 0.0)) throw std::invalid_argument("sigma_convexify_outside: s0 must be positive");
  const double lw = lambda_w(m.T, m.W);
  const double a = -h_min_eig(m) * std::max(1.0 / (s0 * s0), 1.0);
  const double b = lw * std::max(1.0 / s0, 1.0);
  return 2.0 * std::max(a, b);
}

double sigma_convexify_locally_convex(const QuarticModel& m) {
  const double delta = h_min_eig(m);
  if (!(delta > 0.0))
    throw std::invalid_argument(
        "sigma_convexify_locally_convex: H must be positive definite");
  const double lw = lambda_w(m.T, m.W);
  return 0.25 * lw * lw / delta;
}

double sigma_eps_t_bound(const QuarticModel& m, double eps_t) {
  if (!(eps_t > 0.0 && eps_t < 1.0))
    throw std::invalid_argument("sigma_eps_t_bound: eps_t must lie in (0, 1)");
  const double lam = std::max(0.0, -h_min_eig(m)) / m.W.lambda_min();
  const double lw = lambda_w(m.T, m.W);
  const double a = std::pow(3.0 * lam, 3) / (eps_t * eps_t);
  const double b = std::pow(7.0 * lw, 1.5) / std::sqrt(eps_t);
  return std::max(a, b);
}

double sigma_sos_bound(const QuarticModel& m) {
  const double delta = h_min_eig(m);
  if (!(delta > 0.0))
    throw std::invalid_argument("sigma_sos_bound: H must be positive definite");
  const double l3 = m.T.frobenius_bound();
  return 8.0 * l3 * l3 / delta;
}

SigmaThresholds sigma_thresholds(const QuarticModel& m, const Vector* s, double s0,
                                 double eps_t) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  SigmaThresholds out{nan, nan, nan, nan, nan};
  if (s != nullptr && s->size() == m.dim() && m.W.norm(*s) > 0.0)
    out.equivalence_at_s = sigma_equivalence_at(m, *s);
  if (s0 > 0.0) out.convexify_outside = sigma_convexify_outside(m, s0);
  if (h_min_eig(m) > 0.0) {
    out.convexify_locally_convex = sigma_convexify_locally_convex(m);
    out.sos_bound = sigma_sos_bound(m);
  }
  if (eps_t > 0.0 && eps_t < 1.0) out.eps_t_bound = sigma_eps_t_bound(m, eps_t);
  return out;
}

}  // namespace ar3
