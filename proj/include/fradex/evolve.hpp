#ifndef FRADEX_EVOLVE_HPP
#define FRADEX_EVOLVE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fradex/linalg.hpp"
#include "fradex/operator.hpp"

namespace fradex {

/// Raised when a solver state stops being finite.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform time grid: tau must divide t_final exactly (no adaptive stepping).
struct StepperConfig {
  double tau;
  double t_final;
  std::size_t n_steps;

  StepperConfig(double tau_, double t_final_) : tau(tau_), t_final(t_final_) {
    if (!(tau > 0.0) || !(t_final > 0.0))
      throw std::invalid_argument("StepperConfig: tau and t_final must be positive");
    const double steps = std::round(t_final / tau);
    if (steps < 1.0 || std::abs(steps * tau - t_final) > 1e-12 * std::max(1.0, t_final))
      throw std::invalid_argument("StepperConfig: tau must divide t_final");
    n_steps = static_cast<std::size_t>(steps);
  }
};

/// Time-stamped solution states u^0, u^1, ..., u^n at times 0, tau, ..., t_final.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  Grid grid;

  const Vector& final_state() const { return states.back(); }
};

/// Separable source f(t, x) = phi(t) psi(x), with psi sampled at the grid nodes.
struct SourceSpec {
  std::function<double(double)> time_factor;
  Vector space_profile;
};

/// One backward Euler step operator: solves (I - tau A) u_next = u.
/// The factorization is computed once and reused across steps and across
/// trajectories sharing the same (A, tau).
class ImplicitEulerStepper {
public:
  ImplicitEulerStepper(const OperatorMatrix& op, double tau)
      : n_(op.a.rows()), lu_(shifted_system(op, tau)) {}

  std::size_t size() const noexcept { return n_; }

  Vector step(std::span<const double> u) const {
    Vector next = lu_.solve(u);
    for (double x : next)
      if (!std::isfinite(x)) throw NumericalError("implicit Euler: non-finite state");
    return next;
  }

private:
  static DenseMatrix shifted_system(const OperatorMatrix& op, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("ImplicitEulerStepper: tau must be positive");
    const std::size_t n = op.a.rows();
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m(i, j) = (i == j ? 1.0 : 0.0) - tau * op.a(i, j);
    return m;
  }

  std::size_t n_;
  LuFactorization lu_;
};

/// Implicit Euler evolution of du/dt = A u from u0; returns all n_steps + 1 states.
inline Trajectory step_homogeneous(const OperatorMatrix& op, std::span<const double> u0,
                                   const StepperConfig& cfg) {
  if (u0.size() != op.a.rows())
    throw std::invalid_argument("step_homogeneous: state length mismatch");
  const ImplicitEulerStepper stepper(op, cfg.tau);
  Trajectory traj{{}, {}, op.grid};
  traj.times.reserve(cfg.n_steps + 1);
  traj.states.reserve(cfg.n_steps + 1);
  traj.times.push_back(0.0);
  traj.states.emplace_back(u0.begin(), u0.end());
  for (std::size_t s = 1; s <= cfg.n_steps; ++s) {
    traj.states.push_back(stepper.step(traj.states.back()));
    traj.times.push_back(static_cast<double>(s) * cfg.tau);
  }
  return traj;
}

/// Discrete mass h * sum_j u_j, the conserved functional of the no-flux flow.
inline double mass(const Grid& grid, std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x;
  return grid.spacing() * s;
}

enum class DuhamelPath {
  /// One auxiliary trajectory U of the source profile; each source slice is
  /// phi(t*) U(t - t*) by linearity of the time-independent system.
  shared_trajectory,
  /// Re-propagates every source slice from scratch. Algebraically identical,
  /// n_steps times the work; kept for equivalence checks.
  per_source_time
};

/*
 * Inhomogeneous solve via Duhamel splitting: the solution at t_final is the
 * homogeneous evolution of u0 plus the composite-trapezoid recombination
 *
 *   integral_0^T u_{2,t*}(T - t*) dt*
 *     ~ tau/2 u_{2,0}(T) + tau sum_k u_{2,k tau}(T - k tau) + tau/2 u_{2,T}(0),
 *
 * where u_{2,t*} evolves the source slice phi(t*) psi.
 */
inline Vector solve_inhomogeneous_duhamel(const OperatorMatrix& op, std::span<const double> u0,
                                          const SourceSpec& src, const StepperConfig& cfg,
                                          DuhamelPath path = DuhamelPath::shared_trajectory) {
  const std::size_t n = op.a.rows();
  if (u0.size() != n || src.space_profile.size() != n)
    throw std::invalid_argument("solve_inhomogeneous_duhamel: length mismatch");
  if (!src.time_factor)
    throw std::invalid_argument("solve_inhomogeneous_duhamel: missing time factor");

  const ImplicitEulerStepper stepper(op, cfg.tau);
  const std::size_t steps = cfg.n_steps;

  Vector state(u0.begin(), u0.end());
  for (std::size_t s = 0; s < steps; ++s) state = stepper.step(state);
  Vector result = state; // homogeneous part u1(t_final)

  auto weight = [&](std::size_t k) {
    return (k == 0 || k == steps) ? 0.5 * cfg.tau : cfg.tau;
  };

  if (path == DuhamelPath::shared_trajectory) {
    // U(s) for s = 0..T once; slice k contributes phi(k tau) U(T - k tau)
    std::vector<Vector> u_aux;
    u_aux.reserve(steps + 1);
    u_aux.push_back(src.space_profile);
    for (std::size_t s = 0; s < steps; ++s) u_aux.push_back(stepper.step(u_aux.back()));
    for (std::size_t k = 0; k <= steps; ++k) {
      const double c = weight(k) * src.time_factor(static_cast<double>(k) * cfg.tau);
      const Vector& u2 = u_aux[steps - k];
      for (std::size_t j = 0; j < n; ++j) result[j] += c * u2[j];
    }
  } else {
    for (std::size_t k = 0; k <= steps; ++k) {
      const double phi = src.time_factor(static_cast<double>(k) * cfg.tau);
      Vector slice(n);
      for (std::size_t j = 0; j < n; ++j) slice[j] = phi * src.space_profile[j];
      for (std::size_t s = 0; s < steps - k; ++s) slice = stepper.step(slice);
      const double w = weight(k);
      for (std::size_t j = 0; j < n; ++j) result[j] += w * slice[j];
    }
  }
  return result;
}

enum class Wall { left, right };

/// One-sided second-order difference for the wall derivative, taken over the
/// three cells nearest the wall. Exact for sampled polynomials of degree <= 2
/// up to the h/2 offset of the cell-centered nodes; constants give exactly 0.
inline double boundary_flux(std::span<const double> u, const Grid& grid, Wall side) {
  if (u.size() != grid.n_points())
    throw std::invalid_argument("boundary_flux: state length mismatch");
  if (grid.n_points() < 3)
    throw std::invalid_argument("boundary_flux: needs at least three nodes");
  const double inv = 1.0 / (2.0 * grid.spacing());
  const std::size_t last = grid.n_points() - 1;
  if (side == Wall::left)
    return (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv;
  return (3.0 * u[last] - 4.0 * u[last - 1] + u[last - 2]) * inv;
}

} // namespace fradex

#endif
