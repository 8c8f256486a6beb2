#ifndef FRADEX_LINALG_HPP
#define FRADEX_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fradex {

using Vector = std::vector<double>;

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix. The operators here are full by nonlocality, so no
/// banded or sparse storage is provided; sizes stay modest (N <= ~1024).
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> entries_;
};

inline double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Row-sum (infinity) norm.
inline double inf_norm(const DenseMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

inline double max_abs_entry(const DenseMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

inline Vector mat_vec(const DenseMatrix& a, std::span<const double> v) {
  if (v.size() != a.cols())
    throw std::invalid_argument("mat_vec: dimension mismatch");
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

inline DenseMatrix mat_mat(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("mat_mat: dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  // i-k-j order keeps the inner loop contiguous in b and c
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

/// LU factorization with partial pivoting, stored in combined form
/// (unit lower triangle below the diagonal, upper triangle on and above).
class LuFactorization {
public:
  explicit LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
    if (lu_.rows() != lu_.cols())
      throw std::invalid_argument("lu_factor: matrix must be square");
    const std::size_t n = lu_.rows();
    pivots_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        const double cand = std::abs(lu_(i, k));
        if (cand > best) { best = cand; p = i; }
      }
      if (best == 0.0)
        throw SingularMatrixError("lu_factor: exactly singular pivot column");
      pivots_[k] = p;
      if (p != k)
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      const double inv_pivot = 1.0 / lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const double m = lu_(i, k) * inv_pivot;
        lu_(i, k) = m;
        if (m == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
      }
    }
  }

  std::size_t size() const noexcept { return lu_.rows(); }
  const DenseMatrix& combined() const noexcept { return lu_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  Vector solve(std::span<const double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n)
      throw std::invalid_argument("lu_solve: dimension mismatch");
    Vector x(rhs.begin(), rhs.end());
    for (std::size_t k = 0; k < n; ++k)
      if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
    for (std::size_t i = 1; i < n; ++i) {
      double s = x[i];
      for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = x[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
      x[i] = s / lu_(i, i);
    }
    return x;
  }

private:
  DenseMatrix lu_;
  std::vector<std::size_t> pivots_;
};

inline LuFactorization lu_factor(DenseMatrix a) { return LuFactorization(std::move(a)); }

inline Vector lu_solve(const LuFactorization& f, std::span<const double> rhs) {
  return f.solve(rhs);
}

} // namespace fradex

#endif
