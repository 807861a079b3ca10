#pragma once

#include <cstdint>
#include <string>

#include "ar3/model.hpp"

namespace ar3 {

enum class SetKind { diagonal, lowrank, full, ill_hessian, ill_tensor };

SetKind set_kind_from_string(const std::string& name);
const char* to_string(SetKind k);

// Seeded instance generator. Draw order is fixed (g, then H, then the tensor)
// so instances are bit-reproducible across platforms for a given seed.
//
//   diagonal     g = a*randn(n), H = b*symm(randn(n,n)), t = c*randn(n)
//   lowrank      g, H as above, factors a^(k) = c*randn(n), k = 1..rank
//   full         g, H as above, T = c*symm(randn(n,n,n))
//   ill_hessian  H diagonal with entries uniform in [1e-6, 1e3], t = c*randn(n)
//   ill_tensor   H = b*symm(randn), t uniform in [1e-6, 1e3]
//
// W = I and f0 = 0 throughout.
struct GenSpec {
  SetKind kind = SetKind::diagonal;
  int n = 10;
  double a = 10.0;
  double b = 20.0;
  double c = 20.0;
  double sigma = 100.0;
  std::uint64_t seed = 0;
  int rank = 1;  // lowrank only

  void validate() const;
};

// Parameter defaults per set: diagonal/lowrank a=10 b=20 c=20 sigma=100;
// full a=b=c=80 sigma=100; ill_hessian a=10 c=20 sigma=100; ill_tensor
// a=10 b=20 sigma=500.
GenSpec standard_spec(SetKind kind, int n, std::uint64_t seed, int rank = 1);

QuarticModel generate(const GenSpec& spec);

struct OracleResult {
  Vector s_star;
  double value = 0.0;
  double radius = 0.0;  // half-width of the final search box
  std::string method;
};

// Independent global minimizer for n <= 3: grid search over [-radius, radius]^n
// followed by damped-Newton refinement from the best 10 cells; the box is
// doubled until the optimum is interior (the quartic term makes the model
// coercive, so this terminates).
OracleResult brute_force_min(const QuarticModel& m, double radius = 1.0,
                             int grid = 33, int refinements = 100);

}  // namespace ar3
