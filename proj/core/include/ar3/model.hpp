#pragma once

#include "ar3/metric.hpp"
#include "ar3/tensor.hpp"
#include "ar3/types.hpp"

namespace ar3 {

// Quartically regularized cubic polynomial
//   m(s) = f0 + g's + 1/2 s'Hs + 1/6 T[s]^3 + sigma/4 ||s||_W^4,  sigma > 0.
struct QuarticModel {
  double f0;
  Vector g;
  Matrix H;
  SymTensor3 T;
  double sigma;
  Metric W;

  int dim() const { return static_cast<int>(g.size()); }
  // Throws on inconsistent dimensions, asymmetric H, or sigma <= 0.
  void validate() const;
};

struct Derivatives {
  double value = 0.0;
  Vector gradient;  // set when upto >= 1
  Matrix hessian;   // set when upto >= 2
};

double value(const QuarticModel& m, const Vector& s);
// g + Hs + 1/2 T[s]^2 + sigma ||s||_W^2 W s
Vector gradient(const QuarticModel& m, const Vector& s);
// H + T[s] + sigma(||s||_W^2 W + 2 (Ws)(Ws)')
Matrix hessian(const QuarticModel& m, const Vector& s);
// upto in {0, 1, 2}: value; +gradient; +hessian.
Derivatives evaluate(const QuarticModel& m, const Vector& s, int upto);

// Recentred model m'(s) = m(p + s): coefficients become the derivatives of m
// at p while sigma and W are unchanged (the quartic term is shift-covariant).
// The tensor densifies for p != 0; p = 0 returns the input unchanged.
QuarticModel shift(const QuarticModel& m, const Vector& p);

// Diagonal entries of the third-derivative tensor at p,
//   T_jjj + 6 sigma (Wp)_j W_jj,
// computed without materializing the shifted tensor.
Vector shifted_tensor_diagonal(const QuarticModel& m, const Vector& p);

// Exact split of m(s+v) - m(s) into the four structural terms:
//   linear    (g + B(s)s)'v          B(s) = H + 1/2 T[s] + sigma ||s||_W^2 W
//   quadratic 1/2 G(s)[v]^2          G(s) = H +     T[s] + sigma ||s||_W^2 W
//   cubic     1/6 T[v]^3
//   quartic   sigma/4 (||s+v||_W^2 - ||s||_W^2)^2   (always >= 0)
struct DifferenceTerms {
  double linear;
  double quadratic;
  double cubic;
  double quartic;
  double sum() const { return linear + quadratic + cubic + quartic; }
};

DifferenceTerms difference_decomposition(const QuarticModel& m, const Vector& s,
                                         const Vector& v);

// Separable quartic regularization: coordinatewise cubic and quartic terms,
//   m(s) = f0 + g's + 1/2 s'Hs + 1/6 sum_j t_j s_j^3 + 1/4 sum_j sig_j s_j^4,
// with every sig_j > 0.
struct SqrModel {
  double f0;
  Vector g;
  Matrix H;
  Vector t;
  Vector sig;

  int dim() const { return static_cast<int>(g.size()); }
  void validate() const;
};

double sqr_value(const SqrModel& m, const Vector& s);
Vector sqr_gradient(const SqrModel& m, const Vector& s);

// B^(s) = H + 1/2 diag(t_j s_j) + diag(sig_j s_j^2)
Matrix sqr_b_operator(const SqrModel& m, const Vector& s);
// G^(s) = H + 1/3 diag(t_j s_j) + diag(sig_j s_j^2) - diag(t_j^2 / (18 sig_j))
Matrix sqr_g_operator(const SqrModel& m, const Vector& s);

// Exact split of m(s+v) - m(s) for the separable model:
//   linear    (g + B^(s)s)'v
//   quadratic 1/2 G^(s)[v]^2
//   sos       1/4 sum_j sig_j v_j^2 (v_j + 2 s_j + t_j/(3 sig_j))^2  >= 0
struct SqrDifferenceTerms {
  double linear;
  double quadratic;
  double sos;
  double sum() const { return linear + quadratic + sos; }
};

SqrDifferenceTerms sqr_decomposition(const SqrModel& m, const Vector& s, const Vector& v);

}  // namespace ar3
