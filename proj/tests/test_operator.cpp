#include <catch2/catch.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "fradex/operator.hpp"

using namespace fradex;

namespace {

constexpr double pi = std::numbers::pi;

double scale_of(const RieszParams& p, const Grid& g) {
  return p.c_sigma() / std::pow(g.spacing(), p.alpha().value());
}

double max_entry_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

// literal kernel oracle: per-row weight-by-weight summation through the
// Neumann map, no congruence-class regrouping
DenseMatrix assemble_series_literal(const RieszParams& params, const Grid& grid,
                                    double tolerance) {
  const std::size_t n = grid.n_points();
  const NeumannIndexMap ext(n);
  const double scale = scale_of(params, grid);
  DenseMatrix a(n, n);
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(n); ++j) {
    GlCoefficientStream stream(params.alpha());
    double g = stream.next(); // g_0
    a(j, ext.map(j - 1)) += scale * g;
    a(j, ext.map(j + 1)) += scale * g;
    std::int64_t l = 0;
    for (;;) {
      g = stream.next();
      l = static_cast<std::int64_t>(stream.index());
      a(j, ext.map(j + l - 1)) += scale * g;
      a(j, ext.map(j - l + 1)) += scale * g;
      if (stream.tail_magnitude() < tolerance) break;
    }
    const double tail = stream.tail_magnitude();
    a(j, ext.map(j + l)) += scale * tail;
    a(j, ext.map(j - l)) += scale * tail;
  }
  return a;
}

} // namespace

TEST_CASE("grid geometry") {
  const Grid g(4); // N = 3
  CHECK(g.spacing() == 0.25);
  CHECK(g.node(0) == Approx(0.125));
  CHECK(g.node(3) == Approx(0.875));
  const auto xs = g.nodes();
  for (std::size_t j = 1; j < xs.size(); ++j) CHECK(xs[j] > xs[j - 1]);
  for (std::size_t j = 0; j < xs.size(); ++j)
    CHECK(xs[j] + xs[xs.size() - 1 - j] == Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(Grid(0), std::invalid_argument);
}

TEST_CASE("riesz scaling constant") {
  for (double alpha : {1.2, 1.5, 1.9}) {
    const RieszParams p(FractionalOrder(alpha), 0.7);
    CHECK(p.c_sigma() > 0.0);
  }
  const RieszParams classical(FractionalOrder(2.0), 3.0);
  CHECK(classical.c_sigma() == Approx(1.5).epsilon(1e-14));
  CHECK_THROWS_AS(RieszParams(FractionalOrder(1.5), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(RieszParams(FractionalOrder(1.5), -1.0), std::invalid_argument);
}

TEST_CASE("alpha = 2 series operator is the reflecting-wall Laplacian") {
  const Grid grid(4);
  const RieszParams params(FractionalOrder(2.0), 1.0);
  const OperatorMatrix op = assemble_series(params, grid, 1e-12);
  const double ih2 = 16.0; // 1/h^2
  DenseMatrix want(4, 4);
  want(0, 0) = -ih2; want(0, 1) = ih2;
  want(1, 0) = ih2;  want(1, 1) = -2.0 * ih2; want(1, 2) = ih2;
  want(2, 1) = ih2;  want(2, 2) = -2.0 * ih2; want(2, 3) = ih2;
  want(3, 2) = ih2;  want(3, 3) = -ih2;
  CHECK(max_entry_diff(op.a, want) < 1e-12 * ih2);
}

TEST_CASE("constant vectors are annihilated") {
  for (double alpha : {1.2, 1.7, 2.0}) {
    const Grid grid(6);
    const RieszParams params(FractionalOrder(alpha), 0.5);
    const double tol = 1e-8; // deliberately loose: the tail deposit must cover it
    const OperatorMatrix op = assemble_series(params, grid, tol);
    const Vector ones(6, 1.0);
    const Vector av = mat_vec(op.a, ones);
    CHECK(max_norm(av) <= 2.0 * scale_of(params, grid) * tol);
    // the deposited tail keeps row sums at rounding level, far inside the bound
    CHECK(max_norm(av) <= 1e-12 * max_abs_entry(op.a));
  }
}

TEST_CASE("series matches spectral entrywise") {
  const Grid grid(4);
  const RieszParams params(FractionalOrder(1.2), 0.25);
  const OperatorMatrix series = assemble_series(params, grid, 1e-12);
  const OperatorMatrix spectral = assemble_spectral(params, grid);
  CHECK(max_entry_diff(series.a, spectral.a) < 1e-8);
}

TEST_CASE("alpha = 2 cross-method agreement at N = 7") {
  const Grid grid(8);
  const RieszParams params(FractionalOrder(2.0), 1.0);
  const OperatorMatrix series = assemble_series(params, grid, 1e-12);
  const OperatorMatrix spectral = assemble_spectral(params, grid);
  CHECK(max_entry_diff(series.a, spectral.a) < 1e-10 * max_abs_entry(series.a));
}

TEST_CASE("regrouped assembly equals the literal kernel sweep") {
  for (double alpha : {1.8, 2.0}) {
    const Grid grid(6);
    const RieszParams params(FractionalOrder(alpha), 0.9);
    const double tol = 1e-6;
    const OperatorMatrix fast = assemble_series(params, grid, tol);
    const DenseMatrix slow = assemble_series_literal(params, grid, tol);
    CHECK(max_entry_diff(fast.a, slow) < 1e-12 * max_abs_entry(slow));
  }
}

TEST_CASE("single-cell spectral operator is zero") {
  const Grid grid(1);
  const RieszParams params(FractionalOrder(1.4), 2.0);
  const OperatorMatrix op = assemble_spectral(params, grid);
  CHECK(op.a.rows() == 1);
  CHECK(op.a(0, 0) == 0.0);
}

TEST_CASE("spectral row sums vanish") {
  const Grid grid(16);
  const RieszParams params(FractionalOrder(1.6), 0.5);
  const OperatorMatrix op = assemble_spectral(params, grid);
  for (std::size_t i = 0; i < 16; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 16; ++j) s += op.a(i, j);
    CHECK(std::abs(s) < 1e-10);
  }
}

TEST_CASE("eigenvalues") {
  const Grid grid(8);
  const RieszParams params(FractionalOrder(1.3), 0.4);
  CHECK(discrete_eigenvalue(params, grid, 0) == 0.0);
  for (std::size_t k = 1; k < 8; ++k) CHECK(discrete_eigenvalue(params, grid, k) < 0.0);
  CHECK_THROWS_AS(discrete_eigenvalue(params, grid, 8), std::out_of_range);

  // classical limit: -sigma (2/h)^2 sin^2(k pi h / 2)
  const RieszParams classical(FractionalOrder(2.0), 1.0);
  const double h = grid.spacing();
  for (std::size_t k = 1; k < 8; ++k) {
    const double s = std::sin(0.5 * static_cast<double>(k) * pi * h);
    const double want = -(2.0 / h) * (2.0 / h) * s * s;
    CHECK(discrete_eigenvalue(classical, grid, k) == Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("continuous eigenvalues") {
  const RieszParams p1(FractionalOrder(1.2), 0.25);
  CHECK(continuous_eigenvalue(p1, 0) == 0.0);
  CHECK(continuous_eigenvalue(p1, 1) == Approx(-0.25 * std::pow(pi, 1.2)).epsilon(1e-15));
  const RieszParams p2(FractionalOrder(1.6), 0.5);
  CHECK(continuous_eigenvalue(p2, 2) ==
        Approx(-0.5 * std::pow(2.0 * pi, 1.6)).epsilon(1e-15));
}

TEST_CASE("discrete spectrum converges to the continuous one at first order") {
  const RieszParams params(FractionalOrder(1.5), 1.0);
  for (std::size_t k : {1u, 2u, 3u}) {
    double prev_err = 0.0;
    for (std::size_t n : {64u, 128u, 256u}) {
      const Grid grid(n);
      const double err =
          std::abs(discrete_eigenvalue(params, grid, k) - continuous_eigenvalue(params, k));
      if (prev_err > 0.0) {
        const double ratio = err / prev_err;
        CHECK(ratio < 0.65); // halving h roughly halves the defect
        CHECK(ratio > 0.35);
      }
      prev_err = err;
    }
  }
}

TEST_CASE("closed-form inverse basis") {
  CHECK(cosine_inverse_basis(Grid(1))(0, 0) == 1.0);

  const Grid g4(4);
  const DenseMatrix prod = mat_mat(cosine_basis(g4), cosine_inverse_basis(g4));
  CHECK(max_entry_diff(prod, DenseMatrix::identity(4)) < 1e-13);

  // LU-inverse oracle at N = 7
  const Grid g8(8);
  const DenseMatrix b = cosine_basis(g8);
  const auto f = lu_factor(b);
  DenseMatrix inv_lu(8, 8);
  for (std::size_t j = 0; j < 8; ++j) {
    Vector e(8, 0.0);
    e[j] = 1.0;
    const Vector col = lu_solve(f, e);
    for (std::size_t i = 0; i < 8; ++i) inv_lu(i, j) = col[i];
  }
  CHECK(max_entry_diff(cosine_inverse_basis(g8), inv_lu) < 1e-11);
}

TEST_CASE("eigen residuals") {
  const Grid grid(8);
  const RieszParams params(FractionalOrder(1.5), 1.0);
  const EigenSystem es = eigen_system(params, grid);

  const OperatorMatrix spectral = assemble_spectral(params, grid);
  const double spectral_norm = inf_norm(spectral.a);
  for (std::size_t k = 0; k < 8; ++k)
    CHECK(eigen_residual(spectral, es, k) < 1e-10 * spectral_norm);

  const OperatorMatrix series = assemble_series(params, grid, 1e-12);
  CHECK(eigen_residual(series, es, 3) < 1e-8 * inf_norm(series.a));

  // k = 0 pairs the constant vector with eigenvalue zero: the residual is the
  // row-sum defect itself
  CHECK(eigen_residual(series, es, 0) <= 2.0 * scale_of(params, grid) * 1e-12 + 1e-15);
}

TEST_CASE("structural properties across orders and sizes") {
  const double tol = 1e-10;
  for (double alpha : {1.2, 1.5, 2.0}) {
    for (std::size_t n : {4u, 8u}) {
      const Grid grid(n);
      const RieszParams params(FractionalOrder(alpha), 0.8);
      const OperatorMatrix series = assemble_series(params, grid, tol);
      const OperatorMatrix spectral = assemble_spectral(params, grid);
      const double c = scale_of(params, grid);

      for (const OperatorMatrix* op : {&series, &spectral}) {
        const double slack =
            op->method == AssemblyMethod::series ? 0.0 : 1e-12 * max_abs_entry(op->a);
        for (std::size_t i = 0; i < n; ++i) {
          CHECK(op->a(i, i) < 0.0);
          double row = 0.0, col = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            row += op->a(i, j);
            col += op->a(j, i);
            if (i != j) CHECK(op->a(i, j) >= -slack);
            CHECK(op->a(i, j) ==
                  Approx(op->a(n - 1 - i, n - 1 - j)).margin(1e-12 * max_abs_entry(op->a)));
          }
          const double bound = op->method == AssemblyMethod::series ? 2.0 * c * tol
                                                                    : 1e-10 * inf_norm(op->a);
          CHECK(std::abs(row) <= bound);
          CHECK(std::abs(col) <= bound);
        }
      }
      CHECK(max_entry_diff(series.a, spectral.a) <= 4.0 * c * tol);
    }
  }
}

TEST_CASE("assembly input validation") {
  const Grid grid(4);
  const RieszParams params(FractionalOrder(1.5), 1.0);
  CHECK_THROWS_AS(assemble_series(params, grid, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(assemble_series(params, grid, -1e-8), std::invalid_argument);
}
