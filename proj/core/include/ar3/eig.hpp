#pragma once

#include "ar3/metric.hpp"
#include "ar3/types.hpp"

namespace ar3 {

// Solution of the symmetric-definite pencil A U = W U D with U' W U = I.
// Eigenvalues ascend; column j of vectors pairs with eigenvalues[j].
struct GenEig {
  Vector eigenvalues;
  Matrix vectors;
};

// Reduction via W = L L' to a standard symmetric eigenproblem.
// A must be symmetric (1e-10 relative tolerance).
GenEig generalized_eig(const Matrix& a, const Metric& w);

}  // namespace ar3
