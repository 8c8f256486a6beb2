#ifndef FRADEX_OPERATOR_HPP
#define FRADEX_OPERATOR_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fradex/extension.hpp"
#include "fradex/gl_coeff.hpp"
#include "fradex/linalg.hpp"

namespace fradex {

/// Cell-centered mesh on [0,1]: N+1 nodes x_j = (j + 1/2) h with h = 1/(N+1).
/// The domain walls sit midway between each boundary node and its mirror
/// image, which is what makes the even extension enforce zero flux.
class Grid {
public:
  explicit Grid(std::size_t n_points) : n_(n_points) {
    if (n_points == 0) throw std::invalid_argument("Grid: need at least one cell");
  }

  std::size_t n_points() const noexcept { return n_; }          // N+1
  double spacing() const noexcept { return 1.0 / static_cast<double>(n_); }
  double node(std::size_t j) const { return (static_cast<double>(j) + 0.5) * spacing(); }

  std::vector<double> nodes() const {
    std::vector<double> xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = node(j);
    return xs;
  }

private:
  std::size_t n_;
};

/// Riesz operator parameters: order alpha and diffusion intensity sigma.
/// The derived scaling constant is C_sigma = -sigma / (2 cos(alpha pi / 2)),
/// positive on (1,2) and equal to sigma/2 at alpha = 2.
class RieszParams {
public:
  RieszParams(FractionalOrder alpha, double sigma) : alpha_(alpha), sigma_(sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("RieszParams: sigma must be positive");
  }

  FractionalOrder alpha() const noexcept { return alpha_; }
  double sigma() const noexcept { return sigma_; }

  double c_sigma() const {
    return -sigma_ / (2.0 * std::cos(0.5 * alpha_.value() * std::numbers::pi));
  }

private:
  FractionalOrder alpha_;
  double sigma_;
};

enum class AssemblyMethod { series, spectral };

inline std::string to_string(AssemblyMethod m) {
  return m == AssemblyMethod::series ? "series" : "spectral";
}

/// Discrete Riesz operator A(alpha, h) on the cell-centered grid, together
/// with the parameters and construction method it was assembled from.
/// Invariants: negative diagonal, non-negative off-diagonal, row and column
/// sums zero up to the series truncation defect.
struct OperatorMatrix {
  DenseMatrix a;
  RieszParams params;
  Grid grid;
  AssemblyMethod method;
  double series_tolerance; // 0 for the spectral construction
};

/// Cosine eigenvector basis, eigenvalues, and the closed-form inverse basis.
struct EigenSystem {
  std::vector<double> eigenvalues;
  DenseMatrix basis;         // column k = (cos(k pi x_0), ..., cos(k pi x_N))
  DenseMatrix inverse_basis; // D * B^T by discrete cosine orthogonality
};

/// k-th eigenvalue of A(alpha, h):
///   -sigma / cos(alpha pi / 2) * (2/h)^alpha * sin^alpha(k pi h / 2)
///     * cos(k pi h + alpha/2 (pi - k pi h)).
/// Zero for k = 0, strictly negative for 1 <= k <= N.
inline double discrete_eigenvalue(const RieszParams& params, const Grid& grid, std::size_t k) {
  if (k >= grid.n_points())
    throw std::out_of_range("discrete_eigenvalue: mode index exceeds N");
  if (k == 0) return 0.0;
  const double alpha = params.alpha().value();
  const double h = grid.spacing();
  const double pi = std::numbers::pi;
  const double s = std::sin(0.5 * static_cast<double>(k) * pi * h);
  const double phase = std::cos(k * pi * h + 0.5 * alpha * (pi - k * pi * h));
  return -params.sigma() / std::cos(0.5 * alpha * pi) * std::pow(2.0 / h, alpha) *
         std::pow(s, alpha) * phase;
}

/// Eigenvalue -sigma (k pi)^alpha of the continuous Neumann problem; the
/// discrete eigenvalues converge to this at first order in h.
inline double continuous_eigenvalue(const RieszParams& params, std::size_t k) {
  if (k == 0) return 0.0;
  return -params.sigma() * std::pow(static_cast<double>(k) * std::numbers::pi, params.alpha().value());
}

/// B with B(j, k) = cos(k pi x_j).
inline DenseMatrix cosine_basis(const Grid& grid) {
  const std::size_t n = grid.n_points();
  DenseMatrix b(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = grid.node(j);
    for (std::size_t k = 0; k < n; ++k)
      b(j, k) = std::cos(static_cast<double>(k) * std::numbers::pi * xj);
  }
  return b;
}

/// Closed-form inverse of the cosine basis, D * B^T with
/// D = diag(1/(N+1), 2/(N+1), ..., 2/(N+1)); exact by the discrete
/// orthogonality of the cell-centered cosine vectors.
inline DenseMatrix cosine_inverse_basis(const Grid& grid) {
  const std::size_t n = grid.n_points();
  const DenseMatrix b = cosine_basis(grid);
  DenseMatrix inv(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (k == 0 ? 1.0 : 2.0) / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) inv(k, j) = w * b(j, k);
  }
  return inv;
}

inline EigenSystem eigen_system(const RieszParams& params, const Grid& grid) {
  EigenSystem es{std::vector<double>(grid.n_points()), cosine_basis(grid),
                 cosine_inverse_basis(grid)};
  for (std::size_t k = 0; k < grid.n_points(); ++k)
    es.eigenvalues[k] = discrete_eigenvalue(params, grid, k);
  return es;
}

/*
 * Series assembly. Row j of A accumulates (C_sigma / h^alpha) g_l into the
 * columns neumann_index(j + l - 1) and neumann_index(j - l + 1) for
 * l = 0, 1, 2, ...  Because the index map has period 2N+2, the weights are
 * first condensed into per-congruence-class sums
 *
 *     S_r = sum of g_l over l = r (mod 2N+2), l <= L,
 *
 * and each row is then a single sweep over the 2N+2 classes. This is the
 * same regrouping the entries of A admit analytically; every g_l still
 * enters exactly once. The sweep truncates at the first L (>= 1) whose
 * exact tail falls below the tolerance, and the remaining tail mass is
 * deposited where the next term would land, so row sums stay at zero up to
 * rounding rather than up to the tolerance.
 */
inline OperatorMatrix assemble_series(const RieszParams& params, const Grid& grid,
                                      double tolerance) {
  if (!(tolerance > 0.0))
    throw std::invalid_argument("assemble_series: tolerance must be positive");
  const std::size_t n = grid.n_points();
  const NeumannIndexMap ext(n);
  const std::size_t period = 2 * n;

  std::vector<long double> class_sum(period, 0.0L);
  GlCoefficientStream stream(params.alpha());
  class_sum[0] += stream.next(); // g_0
  for (;;) {
    const double g = stream.next();
    class_sum[stream.index() % period] += g;
    if (stream.tail_magnitude() < tolerance) break;
  }
  // remaining mass, placed on the class the next weight belongs to
  class_sum[(stream.index() + 1) % period] += stream.tail_magnitude();

  const double scale =
      params.c_sigma() / std::pow(grid.spacing(), params.alpha().value());
  DenseMatrix a(n, n);
  const auto last = static_cast<std::int64_t>(n) - 1;
  for (std::int64_t j = 0; j <= last; ++j) {
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(period); ++r) {
      const double s = scale * static_cast<double>(class_sum[r]);
      if (s == 0.0) continue;
      a(j, ext.map(j - 1 + r)) += s; // left-shifted branch, offsets j + l - 1
      a(j, ext.map(j + 1 - r)) += s; // right-shifted branch, offsets j - l + 1
    }
  }
  return {std::move(a), params, grid, AssemblyMethod::series, tolerance};
}

/// Spectral assembly A = B diag(lambda) B^{-1} from the closed-form
/// eigenpairs; algebraically identical to the series operator without any
/// truncation.
inline OperatorMatrix assemble_spectral(const RieszParams& params, const Grid& grid) {
  const EigenSystem es = eigen_system(params, grid);
  const std::size_t n = grid.n_points();
  DenseMatrix scaled = es.basis;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) scaled(j, k) *= es.eigenvalues[k];
  return {mat_mat(scaled, es.inverse_basis), params, grid, AssemblyMethod::spectral, 0.0};
}

/// Max-norm residual ||A v_k - lambda_k v_k||_inf for the k-th eigenpair.
inline double eigen_residual(const OperatorMatrix& op, const EigenSystem& es, std::size_t k) {
  const std::size_t n = op.a.rows();
  if (es.basis.rows() != n || k >= n)
    throw std::invalid_argument("eigen_residual: dimension mismatch");
  Vector v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = es.basis(j, k);
  Vector av = mat_vec(op.a, v);
  double r = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    r = std::max(r, std::abs(av[j] - es.eigenvalues[k] * v[j]));
  return r;
}

} // namespace fradex

#endif
