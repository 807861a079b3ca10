#pragma once

#include <cstdint>
#include <vector>

#include "ar3/metric.hpp"
#include "ar3/types.hpp"

namespace ar3 {

// Supersymmetric third-order tensor with structure-aware storage.
//
// Kinds:
//   zero      no storage
//   diagonal  t[j] = T_jjj, all off-diagonal entries zero
//   lowrank   T = sum_k a^(k) (x) a^(k) (x) a^(k), factors stored as columns
//   dense     all n^3 entries, symmetrized on construction
//
// Contractions keep the representation's cost: O(1)/O(n) for zero/diagonal,
// O(nP) for lowrank, O(n^3) for dense. A process-wide multiply counter backs
// the tensor-free accounting tests.
class SymTensor3 {
 public:
  enum class Kind { zero, diagonal, lowrank, dense };

  static SymTensor3 zero(int n);
  static SymTensor3 diagonal(Vector t);
  // factors: n x P, column k is a^(k). P >= 1.
  static SymTensor3 lowrank(Matrix factors);
  // entries: flattened row-major (i*n*n + j*n + k), length n^3. The stored
  // tensor is the symmetric part (average over the 6 index permutations).
  static SymTensor3 dense(int n, std::vector<double> entries);

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  int rank() const;  // lowrank only: number of factors

  // T[s]: matrix with (T[s])_jk = sum_i T_jki s_i
  Matrix contract1(const Vector& s) const;
  // T[s]^2: vector with (T[s]^2)_j = sum_ik T_jik s_i s_k
  Vector contract2(const Vector& s) const;
  // T[s]^3 = sum_ijk T_ijk s_i s_j s_k
  double contract3(const Vector& s) const;

  // Frobenius norm sqrt(sum T_ijk^2), an upper bound on the induced norm
  // max{|T[v1][v2][v3]| : ||vi|| = 1}.
  double frobenius_bound() const;

  double entry(int i, int j, int k) const;
  // T_jjj for every j; O(n) for structured kinds.
  Vector diagonal_entries() const;

  SymTensor3 densified() const;

  const Vector& diag() const;
  const Matrix& factors() const;
  const std::vector<double>& entries() const;

  // Cumulative count of scalar multiplications spent in contractions.
  static std::uint64_t contraction_ops();
  static void reset_contraction_ops();

 private:
  SymTensor3(Kind kind, int n) : kind_(kind), n_(n) {}

  Kind kind_;
  int n_;
  Vector diag_;
  Matrix factors_;
  std::vector<double> entries_;
};

// Metric-scaled tensor-norm bound: Lambda_W such that
// |T[u][v]^2| <= Lambda_W ||u||_W ||v||_W^2.
// Diagonal tensors use the exact max|t_j| * lambda_min(W)^{-3/2}; the special
// case W = diag(|t_j|^{2/3}) returns exactly 1. Other kinds use the Frobenius
// bound times lambda_min(W)^{-3/2}.
double lambda_w(const SymTensor3& t, const Metric& w);

}  // namespace ar3
