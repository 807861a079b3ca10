#pragma once

#include <string>
#include <vector>

#include "ar3/model.hpp"
#include "ar3/secular.hpp"

namespace ar3 {

enum class DtmMode { practical, variant1 };
enum class DtmRule { diagonal, lowrank };

struct DtmConfig {
  DtmMode mode = DtmMode::practical;
  DtmRule rule = DtmRule::diagonal;
  int rank = 1;        // P for the lowrank rule

  double eta = 0.3;    // acceptance ratio
  double eta1 = 3.0;   // very-successful ratio (practical mode)
  double gamma2 = 0.5; // shrink factor for d on (very) successful steps
  double gamma = 2.0;  // growth factor for d on unsuccessful steps
  double alpha = 0.1;  // variant1 cubic-alignment threshold, in (0, 1/2)
  double big_t = 1e6;  // clip bound B on diagonal tensor entries
  double eps = 1e-5;   // target on ||grad m(s)||, floored at ~16 ulp of the
                       // gradient's term magnitudes (deep minima cannot be
                       // certified below evaluation noise)
  double d0 = 0.0;
  int max_outer = 200;

  SecularConfig secular;

  void validate() const;
};

// Surrogate model data in the working basis:
//   M_d(v) = f_i + g'v + 1/2 v'Hv + 1/6 sum_j t_j v_j^3 + (sigma_d)/4 ||v||_We^4.
// For the lowrank rule the basis C maps original steps s = C^-1 v; the
// diagonal rule keeps the original coordinates (has_basis = false).
struct BuiltModel {
  Vector t;        // diagonal tensor entries, |t_j| <= B
  Vector g;
  Matrix h;
  double sigma_d = 0.0;
  Metric w_eff = Metric::identity(1);

  bool has_basis = false;
  Matrix c;        // rows: P tensor factors, then an orthonormal complement
  Matrix c_inv;
  bool fallback_diagonal = false;  // lowrank requested but factors unusable

  QuarticModel as_model(double f) const;
};

// Derivatives of the objective model at the current iterate.
struct IterateState {
  Vector p;
  double f = 0.0;
  Vector g;
  Matrix h;
};

// Applies the tensor rule at the iterate. Diagonal rule: third-derivative
// diagonal entries, sign-preserving clip at B, O(n) tensor work on top of the
// iterate derivatives. Lowrank rule: factors taken verbatim from a lowrank
// model tensor at p = 0 when the rank matches, otherwise recovered by
// rank_approx from the dense third derivative; on factor failure falls back
// to the diagonal rule with fallback_diagonal set.
BuiltModel build_model(const QuarticModel& m, const IterateState& at, DtmRule rule,
                       int rank, double d, double big_t);

enum class IterTag { very_successful, successful, unsuccessful };

struct DtmIterRecord {
  int index = 0;
  double d = 0.0;        // d_i entering the iteration
  double sigma_d = 0.0;
  double rho = 0.0;
  double beta = 0.0;     // T_i[s_d / ||s_d||_We]^3
  double step_norm = 0.0;  // ||s_d||_We
  IterTag tag = IterTag::unsuccessful;
  bool terminal = false;   // accepted because the gradient target was met
  double decrease = 0.0;   // m(s_i) - m(s_{i+1}); 0 on unsuccessful steps
  bool used_safeguard = false;

  // Subproblem diagnostics (converged secular solves).
  std::string secular_status;
  double secular_lambda = 0.0;
  double secular_residual = 0.0;
  double lambda_gap = 0.0;        // |lambda - sigma_d ||s_d||_We^2|
  double local2_min_eig = 0.0;    // lambda_min of the surrogate Hessian at s_d
  double h_scale = 0.0;           // 1 + ||H_i||_F, for margin normalization
};

struct DtmTrace {
  std::vector<DtmIterRecord> iterations;
  int successful = 0;
  int total = 0;
  long function_evals = 0;
  long derivative_evals = 0;
  long cholesky_count = 0;
  int safeguards = 0;
};

enum class DtmStatusKind { converged, max_iterations };

struct DtmResult {
  Vector s;
  double value = 0.0;
  double grad_norm = 0.0;
  DtmStatusKind status = DtmStatusKind::max_iterations;
  DtmTrace trace;
};

// Minimizes m by iterating surrogate subproblems: build M_d at the iterate,
// minimize it through the secular solver (safeguarded by the cubic-regularized
// baseline on M_d, then on m itself), and accept or reject by the ratio test.
// practical mode uses the plain ratio thresholds; variant1 adds the
// cubic-alignment acceptance cases and terminates early whenever
// ||grad m(s_i + s_d)|| <= eps (the early exit applies in both modes).
DtmResult dtm_minimize(const QuarticModel& m, const DtmConfig& cfg = {});

struct RankApproxResult {
  Matrix factors;        // n x P
  double residual_fro = 0.0;  // ||T - sum_k a_k (x)3||_F
  bool converged = false;
};

// Greedy symmetric rank-1 extraction with deflation: shifted power iterations
// from 50 seeded random starts per factor (deterministic), value convergence
// at 1e-10, then two refinement sweeps re-fitting each factor against the
// residual of the others. Residual never exceeds ||T||_F and is non-increasing
// in P.
RankApproxResult rank_approx(const SymTensor3& t, int p);

// Orthonormal basis (as rows) of the complement of the row space of c_hat.
// Throws when c_hat is rank-deficient.
Matrix orth_complement(const Matrix& c_hat);

}  // namespace ar3
