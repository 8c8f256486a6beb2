#ifndef FRADEX_ANALYTIC_HPP
#define FRADEX_ANALYTIC_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fradex/linalg.hpp"
#include "fradex/operator.hpp"

namespace fradex {

/*
 * Cosine-series reference solutions of the Neumann problem,
 *
 *   u(t, x) = F_0 + sum_{k>=1} F_k exp(-sigma (k pi)^alpha t) cos(k pi x),
 *
 * used to measure solver errors. Closed-form coefficients are provided for
 * the two benchmark initial polynomials; arbitrary initial data goes through
 * composite-Simpson quadrature.
 */
class CosineSeries {
public:
  CosineSeries(std::vector<double> coefficients, double sigma, double alpha)
      : coefficients_(std::move(coefficients)), sigma_(sigma), alpha_(alpha) {
    if (coefficients_.empty())
      throw std::invalid_argument("CosineSeries: needs at least the mean coefficient");
  }

  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  double sigma() const noexcept { return sigma_; }
  double alpha() const noexcept { return alpha_; }
  std::size_t k_max() const noexcept { return coefficients_.size() - 1; }

  double evaluate(double t, double x) const {
    const double pi = std::numbers::pi;
    double s = coefficients_[0];
    for (std::size_t k = 1; k < coefficients_.size(); ++k) {
      const double fk = coefficients_[k];
      if (fk == 0.0) continue;
      const double rate = sigma_ * std::pow(static_cast<double>(k) * pi, alpha_);
      s += fk * std::exp(-rate * t) * std::cos(static_cast<double>(k) * pi * x);
    }
    return s;
  }

  Vector sample(const Grid& grid, double t) const {
    Vector v(grid.n_points());
    for (std::size_t j = 0; j < grid.n_points(); ++j) v[j] = evaluate(t, grid.node(j));
    return v;
  }

  /// Estimated bound on sum_{k > k_max} |F_k| under the empirically verified
  /// k^-4 decay of the benchmark coefficients.
  double truncation_tail_bound() const {
    const std::size_t k = k_max();
    if (k == 0) return 0.0;
    return std::abs(coefficients_[k]) * static_cast<double>(k) / 3.0;
  }

private:
  std::vector<double> coefficients_;
  double sigma_;
  double alpha_;
};

/// Reference series for the homogeneous benchmark: alpha = 1.2, sigma = 0.25,
/// initial data x^4/4 - x^2/2. F_0 = -14/120, F_k = (-1)^{k+1} 12/(k pi)^4.
inline CosineSeries experiment1_series(std::size_t k_max = 512) {
  std::vector<double> f(k_max + 1);
  f[0] = -14.0 / 120.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double kpi = static_cast<double>(k) * std::numbers::pi;
    f[k] = (k % 2 == 1 ? 12.0 : -12.0) / (kpi * kpi * kpi * kpi);
  }
  return CosineSeries(std::move(f), 0.25, 1.2);
}

/// Homogeneous part of the inhomogeneous benchmark: alpha = 1.6, sigma = 0.5,
/// initial data 2x^2 - (4/3)x^3. F_0 = 1/3, F_k = 16((-1)^k - 1)/(k pi)^4
/// (zero for even k).
inline CosineSeries experiment2_series(std::size_t k_max = 512) {
  std::vector<double> f(k_max + 1);
  f[0] = 1.0 / 3.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (k % 2 == 0) continue;
    const double kpi = static_cast<double>(k) * std::numbers::pi;
    f[k] = -32.0 / (kpi * kpi * kpi * kpi);
  }
  return CosineSeries(std::move(f), 0.5, 1.6);
}

/// Cosine coefficients of an arbitrary function on (0,1) by composite Simpson:
/// F_0 = int_0^1 f, F_k = 2 int_0^1 f(x) cos(k pi x) dx.
inline CosineSeries series_from_function(const std::function<double(double)>& f, double sigma,
                                         double alpha, std::size_t k_max = 512,
                                         std::size_t panels = std::size_t{1} << 14) {
  if (panels < 2 || panels % 2 != 0)
    throw std::invalid_argument("series_from_function: panel count must be even");
  const double dx = 1.0 / static_cast<double>(panels);
  std::vector<double> samples(panels + 1), weights(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    samples[i] = f(static_cast<double>(i) * dx);
    if (!std::isfinite(samples[i]))
      throw std::invalid_argument("series_from_function: non-finite sample");
    weights[i] = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
  }
  std::vector<double> coeff(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) {
    double s = 0.0;
    const double kpi = static_cast<double>(k) * std::numbers::pi;
    for (std::size_t i = 0; i <= panels; ++i)
      s += weights[i] * samples[i] * std::cos(kpi * static_cast<double>(i) * dx);
    s *= dx / 3.0;
    coeff[k] = (k == 0) ? s : 2.0 * s;
  }
  return CosineSeries(std::move(coeff), sigma, alpha);
}

/// Closed form of int_0^t e^{-s} e^{-mu (t - s)} ds for mu != 1: the weight
/// the mode-1 source accumulates up to time t.
inline double duhamel_source_factor(double t, double mu) {
  return (std::exp(-t) - std::exp(-mu * t)) / (mu - 1.0);
}

/// Exact solution of the inhomogeneous benchmark (source e^{-t} cos(pi x))
/// at (t, x): the homogeneous series plus the closed-form mode-1 integral.
inline double experiment2_inhomogeneous_value(double t, double x, std::size_t k_max = 512) {
  const double mu = 0.5 * std::pow(std::numbers::pi, 1.6);
  return experiment2_series(k_max).evaluate(t, x) +
         std::cos(std::numbers::pi * x) * duhamel_source_factor(t, mu);
}

inline Vector experiment2_inhomogeneous_reference(const Grid& grid, double t,
                                                  std::size_t k_max = 512) {
  const CosineSeries series = experiment2_series(k_max);
  const double mu = 0.5 * std::pow(std::numbers::pi, 1.6);
  Vector v(grid.n_points());
  for (std::size_t j = 0; j < grid.n_points(); ++j) {
    const double x = grid.node(j);
    v[j] = series.evaluate(t, x) +
           std::cos(std::numbers::pi * x) * duhamel_source_factor(t, mu);
  }
  return v;
}

} // namespace fradex

#endif
