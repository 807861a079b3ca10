#pragma once

#include <Eigen/Core>

namespace ar3 {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// (M + M^T)/2, the symmetric part.
inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace ar3
