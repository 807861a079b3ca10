#include "ar3/eig.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ar3 {

GenEig generalized_eig(const Matrix& a, const Metric& w) {
  if (a.rows() != a.cols()) throw std::invalid_argument("generalized_eig: A must be square");
  if (a.rows() != w.dim()) throw std::invalid_argument("generalized_eig: dimension mismatch");
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale))
    throw std::invalid_argument("generalized_eig: A must be symmetric");

  GenEig out;
  if (w.is_identity()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
    if (es.info() != Eigen::Success)
      throw std::runtime_error("generalized_eig: eigensolver failed");
    out.eigenvalues = es.eigenvalues();
    out.vectors = es.eigenvectors();
    return out;
  }

  // L^-1 A L^-T is symmetric with the same eigenvalues; U = L^-T Q.
  const Eigen::LLT<Matrix>& llt = w.llt();
  Matrix reduced = llt.matrixL().solve(symmetrize(a));
  reduced = llt.matrixL().solve(reduced.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(reduced));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("generalized_eig: eigensolver failed");
  out.eigenvalues = es.eigenvalues();
  out.vectors = llt.matrixU().solve(es.eigenvectors());
  return out;
}

}  // namespace ar3
