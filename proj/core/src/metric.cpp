#include "ar3/metric.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ar3 {

Metric Metric::identity(int n) {
  if (n <= 0) throw std::invalid_argument("Metric: dimension must be positive");
  Metric m;
  m.n_ = n;
  return m;
}

Metric::Metric(Matrix w) {
  if (w.rows() != w.cols() || w.rows() == 0)
    throw std::invalid_argument("Metric: W must be square and non-empty");
  const double scale = w.cwiseAbs().maxCoeff();
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + scale))
    throw std::invalid_argument("Metric: W must be symmetric");
  n_ = static_cast<int>(w.rows());
  w = symmetrize(w);

  Eigen::SelfAdjointEigenSolver<Matrix> es(w, Eigen::EigenvaluesOnly);
  lambda_min_ = es.eigenvalues().minCoeff();
  lambda_max_ = es.eigenvalues().maxCoeff();
  if (lambda_min_ <= 0.0)
    throw std::invalid_argument("Metric: W must be positive definite");

  identity_ = (w - Matrix::Identity(n_, n_)).cwiseAbs().maxCoeff() == 0.0;
  if (identity_) {
    lambda_min_ = lambda_max_ = 1.0;
    return;
  }
  w_ = std::make_shared<Matrix>(std::move(w));
  llt_ = std::make_shared<Eigen::LLT<Matrix>>(*w_);
  if (llt_->info() != Eigen::Success)
    throw std::invalid_argument("Metric: Cholesky of W failed");
}

Vector Metric::apply(const Vector& v) const {
  if (v.size() != n_) throw std::invalid_argument("Metric::apply: dimension mismatch");
  if (identity_) return v;
  return *w_ * v;
}

double Metric::norm2(const Vector& v) const {
  if (v.size() != n_) throw std::invalid_argument("Metric::norm2: dimension mismatch");
  const double q = identity_ ? v.squaredNorm() : v.dot(*w_ * v);
  return q < 0.0 ? 0.0 : q;
}

double Metric::norm(const Vector& v) const { return std::sqrt(norm2(v)); }

const Matrix& Metric::matrix() const {
  if (!w_) w_ = std::make_shared<Matrix>(Matrix::Identity(n_, n_));
  return *w_;
}

const Eigen::LLT<Matrix>& Metric::llt() const {
  if (!llt_) {
    // Identity metric: factor once on demand.
    llt_ = std::make_shared<Eigen::LLT<Matrix>>(Matrix::Identity(n_, n_));
  }
  return *llt_;
}

}  // namespace ar3
