#include "ar3/tensor.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace ar3 {

namespace {
std::atomic<std::uint64_t> g_contraction_ops{0};

void count_ops(std::uint64_t n) {
  g_contraction_ops.fetch_add(n, std::memory_order_relaxed);
}
}  // namespace

std::uint64_t SymTensor3::contraction_ops() {
  return g_contraction_ops.load(std::memory_order_relaxed);
}

void SymTensor3::reset_contraction_ops() {
  g_contraction_ops.store(0, std::memory_order_relaxed);
}

SymTensor3 SymTensor3::zero(int n) {
  if (n <= 0) throw std::invalid_argument("SymTensor3: dimension must be positive");
  return SymTensor3(Kind::zero, n);
}

SymTensor3 SymTensor3::diagonal(Vector t) {
  if (t.size() == 0) throw std::invalid_argument("SymTensor3: empty diagonal");
  SymTensor3 out(Kind::diagonal, static_cast<int>(t.size()));
  out.diag_ = std::move(t);
  return out;
}

SymTensor3 SymTensor3::lowrank(Matrix factors) {
  if (factors.rows() == 0 || factors.cols() == 0)
    throw std::invalid_argument("SymTensor3: lowrank needs at least one factor");
  SymTensor3 out(Kind::lowrank, static_cast<int>(factors.rows()));
  out.factors_ = std::move(factors);
  return out;
}

SymTensor3 SymTensor3::dense(int n, std::vector<double> entries) {
  if (n <= 0) throw std::invalid_argument("SymTensor3: dimension must be positive");
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  if (entries.size() != n3)
    throw std::invalid_argument("SymTensor3: dense entries must have length n^3");
  SymTensor3 out(Kind::dense, n);
  // Symmetrize: average over the 6 permutations of each index triple.
  std::vector<double> sym(n3);
  auto at = [&](int i, int j, int k) -> double {
    return entries[(static_cast<std::size_t>(i) * n + j) * n + k];
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        sym[(static_cast<std::size_t>(i) * n + j) * n + k] =
            (at(i, j, k) + at(i, k, j) + at(j, i, k) + at(j, k, i) + at(k, i, j) +
             at(k, j, i)) /
            6.0;
  out.entries_ = std::move(sym);
  return out;
}

int SymTensor3::rank() const {
  if (kind_ != Kind::lowrank)
    throw std::logic_error("SymTensor3::rank: not a lowrank tensor");
  return static_cast<int>(factors_.cols());
}

const Vector& SymTensor3::diag() const {
  if (kind_ != Kind::diagonal)
    throw std::logic_error("SymTensor3::diag: not a diagonal tensor");
  return diag_;
}

const Matrix& SymTensor3::factors() const {
  if (kind_ != Kind::lowrank)
    throw std::logic_error("SymTensor3::factors: not a lowrank tensor");
  return factors_;
}

const std::vector<double>& SymTensor3::entries() const {
  if (kind_ != Kind::dense)
    throw std::logic_error("SymTensor3::entries: not a dense tensor");
  return entries_;
}

Matrix SymTensor3::contract1(const Vector& s) const {
  if (s.size() != n_) throw std::invalid_argument("SymTensor3::contract1: dimension mismatch");
  switch (kind_) {
    case Kind::zero:
      return Matrix::Zero(n_, n_);
    case Kind::diagonal: {
      count_ops(static_cast<std::uint64_t>(n_));
      Matrix m = Matrix::Zero(n_, n_);
      m.diagonal() = diag_.cwiseProduct(s);
      return m;
    }
    case Kind::lowrank: {
      const int p = static_cast<int>(factors_.cols());
      Matrix m = Matrix::Zero(n_, n_);
      for (int k = 0; k < p; ++k) {
        const double w = factors_.col(k).dot(s);
        m.noalias() += w * (factors_.col(k) * factors_.col(k).transpose());
      }
      count_ops(static_cast<std::uint64_t>(p) * n_ * (n_ + 1));
      return m;
    }
    case Kind::dense: {
      Matrix m(n_, n_);
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          double acc = 0.0;
          const std::size_t base = (static_cast<std::size_t>(j) * n_ + k) * n_;
          for (int i = 0; i < n_; ++i) acc += entries_[base + i] * s[i];
          m(j, k) = acc;
        }
      count_ops(static_cast<std::uint64_t>(n_) * n_ * n_);
      return m;
    }
  }
  return Matrix();
}

Vector SymTensor3::contract2(const Vector& s) const {
  if (s.size() != n_) throw std::invalid_argument("SymTensor3::contract2: dimension mismatch");
  switch (kind_) {
    case Kind::zero:
      return Vector::Zero(n_);
    case Kind::diagonal: {
      count_ops(2 * static_cast<std::uint64_t>(n_));
      return diag_.cwiseProduct(s.cwiseProduct(s));
    }
    case Kind::lowrank: {
      const int p = static_cast<int>(factors_.cols());
      Vector v = Vector::Zero(n_);
      for (int k = 0; k < p; ++k) {
        const double w = factors_.col(k).dot(s);
        v.noalias() += (w * w) * factors_.col(k);
      }
      count_ops(static_cast<std::uint64_t>(p) * (2 * n_ + 2));
      return v;
    }
    case Kind::dense: {
      Vector v = Vector::Zero(n_);
      for (int j = 0; j < n_; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n_; ++i) {
          const std::size_t base = (static_cast<std::size_t>(j) * n_ + i) * n_;
          double inner = 0.0;
          for (int k = 0; k < n_; ++k) inner += entries_[base + k] * s[k];
          acc += inner * s[i];
        }
        v[j] = acc;
      }
      count_ops(static_cast<std::uint64_t>(n_) * n_ * (n_ + 1));
      return v;
    }
  }
  return Vector();
}

double SymTensor3::contract3(const Vector& s) const {
  if (s.size() != n_) throw std::invalid_argument("SymTensor3::contract3: dimension mismatch");
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::diagonal: {
      count_ops(3 * static_cast<std::uint64_t>(n_));
      return diag_.dot(s.cwiseProduct(s).cwiseProduct(s));
    }
    case Kind::lowrank: {
      const int p = static_cast<int>(factors_.cols());
      double acc = 0.0;
      for (int k = 0; k < p; ++k) {
        const double w = factors_.col(k).dot(s);
        acc += w * w * w;
      }
      count_ops(static_cast<std::uint64_t>(p) * (n_ + 2));
      return acc;
    }
    case Kind::dense:
      return contract2(s).dot(s);
  }
  return 0.0;
}

double SymTensor3::frobenius_bound() const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::diagonal:
      return diag_.norm();
    case Kind::lowrank: {
      // ||sum_k a_k^(x)3||_F^2 = sum_kl (a_k' a_l)^3
      const Matrix gram = factors_.transpose() * factors_;
      double f2 = 0.0;
      for (int k = 0; k < gram.rows(); ++k)
        for (int l = 0; l < gram.cols(); ++l) f2 += std::pow(gram(k, l), 3);
      return std::sqrt(f2 < 0.0 ? 0.0 : f2);
    }
    case Kind::dense: {
      double f2 = 0.0;
      for (double e : entries_) f2 += e * e;
      return std::sqrt(f2);
    }
  }
  return 0.0;
}

double SymTensor3::entry(int i, int j, int k) const {
  if (i < 0 || j < 0 || k < 0 || i >= n_ || j >= n_ || k >= n_)
    throw std::out_of_range("SymTensor3::entry: index out of range");
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::diagonal:
      return (i == j && j == k) ? diag_[i] : 0.0;
    case Kind::lowrank: {
      double acc = 0.0;
      for (int c = 0; c < factors_.cols(); ++c)
        acc += factors_(i, c) * factors_(j, c) * factors_(k, c);
      return acc;
    }
    case Kind::dense:
      return entries_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  return 0.0;
}

Vector SymTensor3::diagonal_entries() const {
  Vector d(n_);
  switch (kind_) {
    case Kind::zero:
      d.setZero();
      break;
    case Kind::diagonal:
      d = diag_;
      break;
    case Kind::lowrank:
      for (int j = 0; j < n_; ++j) {
        double acc = 0.0;
        for (int c = 0; c < factors_.cols(); ++c) acc += std::pow(factors_(j, c), 3);
        d[j] = acc;
      }
      break;
    case Kind::dense:
      for (int j = 0; j < n_; ++j)
        d[j] = entries_[(static_cast<std::size_t>(j) * n_ + j) * n_ + j];
      break;
  }
  return d;
}

SymTensor3 SymTensor3::densified() const {
  if (kind_ == Kind::dense) return *this;
  std::vector<double> e(static_cast<std::size_t>(n_) * n_ * n_, 0.0);
  switch (kind_) {
    case Kind::zero:
      break;
    case Kind::diagonal:
      for (int j = 0; j < n_; ++j)
        e[(static_cast<std::size_t>(j) * n_ + j) * n_ + j] = diag_[j];
      break;
    case Kind::lowrank:
      for (int c = 0; c < factors_.cols(); ++c)
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
              e[(static_cast<std::size_t>(i) * n_ + j) * n_ + k] +=
                  factors_(i, c) * factors_(j, c) * factors_(k, c);
      break;
    case Kind::dense:
      break;
  }
  SymTensor3 out(Kind::dense, n_);
  out.entries_ = std::move(e);
  return out;
}

double lambda_w(const SymTensor3& t, const Metric& w) {
  if (t.dim() != w.dim()) throw std::invalid_argument("lambda_w: dimension mismatch");
  const double wmin = w.lambda_min();
  const double scaling = 1.0 / (wmin * std::sqrt(wmin));
  if (t.kind() == SymTensor3::Kind::zero) return 0.0;
  if (t.kind() == SymTensor3::Kind::diagonal) {
    const Vector& d = t.diag();
    // W = diag(|t_j|^{2/3}) makes the bound exactly 1.
    if (!w.is_identity()) {
      const Matrix& wm = w.matrix();
      bool matches = true;
      for (int i = 0; i < t.dim() && matches; ++i) {
        for (int j = 0; j < t.dim() && matches; ++j) {
          const double want = (i == j) ? std::pow(std::abs(d[i]), 2.0 / 3.0) : 0.0;
          if (std::abs(wm(i, j) - want) > 1e-12 * (1.0 + std::abs(want))) matches = false;
        }
      }
      if (matches) return 1.0;
    }
    return d.cwiseAbs().maxCoeff() * scaling;
  }
  return t.frobenius_bound() * scaling;
}

}  // namespace ar3
