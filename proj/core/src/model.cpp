#include "ar3/model.hpp"

#include <stdexcept>

namespace ar3 {

void QuarticModel::validate() const {
  const int n = dim();
  if (n == 0) throw std::invalid_argument("QuarticModel: empty gradient");
  if (H.rows() != n || H.cols() != n)
    throw std::invalid_argument("QuarticModel: H dimension mismatch");
  const double scale = H.cwiseAbs().maxCoeff();
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale))
    throw std::invalid_argument("QuarticModel: H must be symmetric");
  if (T.dim() != n) throw std::invalid_argument("QuarticModel: tensor dimension mismatch");
  if (W.dim() != n) throw std::invalid_argument("QuarticModel: metric dimension mismatch");
  if (!(sigma > 0.0)) throw std::invalid_argument("QuarticModel: sigma must be positive");
}

namespace {
void check_point(const QuarticModel& m, const Vector& s, const char* who) {
  if (s.size() != m.dim()) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}
}  // namespace

double value(const QuarticModel& m, const Vector& s) {
  check_point(m, s, "value");
  const double w2 = m.W.norm2(s);
  return m.f0 + m.g.dot(s) + 0.5 * s.dot(m.H * s) + m.T.contract3(s) / 6.0 +
         0.25 * m.sigma * w2 * w2;
}

Vector gradient(const QuarticModel& m, const Vector& s) {
  check_point(m, s, "gradient");
  const double w2 = m.W.norm2(s);
  return m.g + m.H * s + 0.5 * m.T.contract2(s) + m.sigma * w2 * m.W.apply(s);
}

Matrix hessian(const QuarticModel& m, const Vector& s) {
  check_point(m, s, "hessian");
  const double w2 = m.W.norm2(s);
  const Vector ws = m.W.apply(s);
  Matrix h = m.H + m.T.contract1(s) + m.sigma * w2 * m.W.matrix();
  h.noalias() += 2.0 * m.sigma * (ws * ws.transpose());
  return h;
}

Derivatives evaluate(const QuarticModel& m, const Vector& s, int upto) {
  if (upto < 0 || upto > 2) throw std::invalid_argument("evaluate: upto must be 0, 1, or 2");
  check_point(m, s, "evaluate");
  Derivatives d;
  const double w2 = m.W.norm2(s);
  const Vector hs = m.H * s;
  d.value = m.f0 + m.g.dot(s) + 0.5 * s.dot(hs) + m.T.contract3(s) / 6.0 +
            0.25 * m.sigma * w2 * w2;
  if (upto >= 1) {
    const Vector ws = m.W.apply(s);
    d.gradient = m.g + hs + 0.5 * m.T.contract2(s) + m.sigma * w2 * ws;
    if (upto >= 2) {
      d.hessian = m.H + m.T.contract1(s) + m.sigma * w2 * m.W.matrix();
      d.hessian.noalias() += 2.0 * m.sigma * (ws * ws.transpose());
    }
  }
  return d;
}

QuarticModel shift(const QuarticModel& m, const Vector& p) {
  check_point(m, p, "shift");
  if (p.isZero(0.0)) return m;
  const int n = m.dim();
  QuarticModel out = m;
  out.f0 = value(m, p);
  out.g = gradient(m, p);
  out.H = hessian(m, p);
  // Third derivative at p: T_ijk + 2 sigma [(Wp)_i W_jk + (Wp)_j W_ik + (Wp)_k W_ij].
  const Vector wp = m.W.apply(p);
  const Matrix& wmat = m.W.matrix();
  const SymTensor3 tdense = m.T.densified();
  std::vector<double> e(static_cast<std::size_t>(n) * n * n);
  const std::vector<double>& te = tdense.entries();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        e[(static_cast<std::size_t>(i) * n + j) * n + k] =
            te[(static_cast<std::size_t>(i) * n + j) * n + k] +
            2.0 * m.sigma * (wp[i] * wmat(j, k) + wp[j] * wmat(i, k) + wp[k] * wmat(i, j));
  out.T = SymTensor3::dense(n, std::move(e));
  return out;
}

Vector shifted_tensor_diagonal(const QuarticModel& m, const Vector& p) {
  check_point(m, p, "shifted_tensor_diagonal");
  Vector d = m.T.diagonal_entries();
  if (p.isZero(0.0)) return d;
  const Vector wp = m.W.apply(p);
  if (m.W.is_identity()) {
    d += 6.0 * m.sigma * wp;
  } else {
    const Matrix& wmat = m.W.matrix();
    for (int j = 0; j < m.dim(); ++j) d[j] += 6.0 * m.sigma * wp[j] * wmat(j, j);
  }
  return d;
}

DifferenceTerms difference_decomposition(const QuarticModel& m, const Vector& s,
                                         const Vector& v) {
  check_point(m, s, "difference_decomposition");
  check_point(m, v, "difference_decomposition");
  const double w2s = m.W.norm2(s);
  DifferenceTerms out;
  // g + B(s)s = grad m(s); reuse the gradient form.
  out.linear = gradient(m, s).dot(v);
  const Matrix ts = m.T.contract1(s);
  out.quadratic = 0.5 * (v.dot(m.H * v) + v.dot(ts * v) + m.sigma * w2s * m.W.norm2(v));
  out.cubic = m.T.contract3(v) / 6.0;
  const double dw = m.W.norm2(s + v) - w2s;
  out.quartic = 0.25 * m.sigma * dw * dw;
  return out;
}

void SqrModel::validate() const {
  const int n = dim();
  if (n == 0) throw std::invalid_argument("SqrModel: empty gradient");
  if (H.rows() != n || H.cols() != n)
    throw std::invalid_argument("SqrModel: H dimension mismatch");
  const double scale = H.cwiseAbs().maxCoeff();
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale))
    throw std::invalid_argument("SqrModel: H must be symmetric");
  if (t.size() != n || sig.size() != n)
    throw std::invalid_argument("SqrModel: coefficient dimension mismatch");
  if (!(sig.minCoeff() > 0.0))
    throw std::invalid_argument("SqrModel: every sig_j must be positive");
}

namespace {
void check_sqr(const SqrModel& m, const Vector& s, const char* who) {
  if (s.size() != m.dim()) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  if (!(m.sig.minCoeff() > 0.0))
    throw std::invalid_argument(std::string(who) + ": every sig_j must be positive");
}
}  // namespace

double sqr_value(const SqrModel& m, const Vector& s) {
  check_sqr(m, s, "sqr_value");
  const Vector s2 = s.cwiseProduct(s);
  return m.f0 + m.g.dot(s) + 0.5 * s.dot(m.H * s) + m.t.dot(s2.cwiseProduct(s)) / 6.0 +
         0.25 * m.sig.dot(s2.cwiseProduct(s2));
}

Vector sqr_gradient(const SqrModel& m, const Vector& s) {
  check_sqr(m, s, "sqr_gradient");
  const Vector s2 = s.cwiseProduct(s);
  return m.g + m.H * s + 0.5 * m.t.cwiseProduct(s2) + m.sig.cwiseProduct(s2.cwiseProduct(s));
}

Matrix sqr_b_operator(const SqrModel& m, const Vector& s) {
  check_sqr(m, s, "sqr_b_operator");
  Matrix b = m.H;
  b.diagonal() += 0.5 * m.t.cwiseProduct(s) + m.sig.cwiseProduct(s.cwiseProduct(s));
  return b;
}

Matrix sqr_g_operator(const SqrModel& m, const Vector& s) {
  check_sqr(m, s, "sqr_g_operator");
  Matrix g = m.H;
  g.diagonal() += m.t.cwiseProduct(s) / 3.0 + m.sig.cwiseProduct(s.cwiseProduct(s)) -
                  m.t.cwiseProduct(m.t).cwiseQuotient(18.0 * m.sig);
  return g;
}

SqrDifferenceTerms sqr_decomposition(const SqrModel& m, const Vector& s, const Vector& v) {
  check_sqr(m, s, "sqr_decomposition");
  check_sqr(m, v, "sqr_decomposition");
  SqrDifferenceTerms out;
  out.linear = (m.g + sqr_b_operator(m, s) * s).dot(v);
  out.quadratic = 0.5 * v.dot(sqr_g_operator(m, s) * v);
  out.sos = 0.0;
  for (int j = 0; j < m.dim(); ++j) {
    const double w = v[j] + 2.0 * s[j] + m.t[j] / (3.0 * m.sig[j]);
    out.sos += 0.25 * m.sig[j] * v[j] * v[j] * w * w;
  }
  return out;
}

}  // namespace ar3
