#pragma once

#include <memory>

#include <Eigen/Cholesky>

#include "ar3/types.hpp"

namespace ar3 {

// Symmetric positive definite metric W defining ||v||_W = sqrt(v' W v).
// The identity case is tracked explicitly so W-products and norms cost O(n)
// instead of O(n^2); general W caches its Cholesky factor and spectral bounds.
class Metric {
 public:
  static Metric identity(int n);
  // Validates symmetry (1e-12 relative) and positive definiteness.
  explicit Metric(Matrix w);

  int dim() const { return n_; }
  bool is_identity() const { return identity_; }

  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

  // W v
  Vector apply(const Vector& v) const;
  // v' W v (clamped at 0 against roundoff)
  double norm2(const Vector& v) const;
  double norm(const Vector& v) const;

  // Dense W; materialized lazily for the identity.
  const Matrix& matrix() const;

  // Lower Cholesky factor L with W = L L'. Identity for the identity metric.
  const Eigen::LLT<Matrix>& llt() const;

 private:
  Metric() = default;

  int n_ = 0;
  bool identity_ = true;
  double lambda_min_ = 1.0;
  double lambda_max_ = 1.0;
  mutable std::shared_ptr<Matrix> w_;  // lazy for identity
  mutable std::shared_ptr<Eigen::LLT<Matrix>> llt_;
};

}  // namespace ar3
