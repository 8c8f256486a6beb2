#ifndef FRADEX_HARNESS_HPP
#define FRADEX_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fradex/analytic.hpp"
#include "fradex/evolve.hpp"
#include "fradex/operator.hpp"

namespace fradex::harness {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class InitialKind { experiment1, experiment2, cosine_mode, constant, from_file };
enum class SourceKind { none, experiment2 };

struct InitialSpec {
  InitialKind kind = InitialKind::experiment1;
  std::size_t mode = 0;   // cosine_mode
  double value = 0.0;     // constant
  std::string path;       // from_file
};

/// Flat key=value run configuration; command-line flags override file values.
struct RunConfig {
  double alpha = 1.2;
  double sigma = 0.25;
  std::size_t n_points = 8;
  double tau = 0.125;
  double t_final = 1.0;
  InitialSpec initial{};
  SourceKind source = SourceKind::none;
  AssemblyMethod method = AssemblyMethod::spectral;
  double series_tolerance = 1e-10;
  std::string out;
  std::string eigen_out;
  std::size_t ladder_min = 2;
  std::size_t ladder_max = 512;
  double fixed_tau = 0.0; // 0: tau = h on every ladder rung

  /// Re-checks every positivity/divisibility constraint the inner modules
  /// enforce, so bad configs fail before any work starts.
  void validate() const {
    try {
      RieszParams params(FractionalOrder(alpha), sigma);
      (void)params;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (n_points == 0) throw ConfigError("n must be positive");
    if (!(tau > 0.0)) throw ConfigError("tau must be positive");
    if (!(t_final > 0.0)) throw ConfigError("t-final must be positive");
    if (!(series_tolerance > 0.0)) throw ConfigError("tol must be positive");
    if (fixed_tau < 0.0) throw ConfigError("fixed-tau must be nonnegative");
    try {
      StepperConfig check(tau, t_final);
      (void)check;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (ladder_min < 2) throw ConfigError("ladder-min must be at least 2");
    std::size_t n = ladder_min;
    while (n < ladder_max) n *= 2;
    if (n != ladder_max) throw ConfigError("ladder-max must be ladder-min times a power of two");
    if (initial.kind == InitialKind::from_file && initial.path.empty())
      throw ConfigError("initial file path is empty");
  }
};

// ---------------------------------------------------------------------------
// config parsing

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value for '" + key + "': " + value);
  }
  if (used != value.size())
    throw ConfigError("invalid numeric value for '" + key + "': " + value);
  return x;
}

inline std::size_t parse_size(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    // stoull would wrap a negative literal around
    if (value.find('-') != std::string::npos) throw std::invalid_argument(value);
    x = std::stoull(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("invalid integer value for '" + key + "': " + value);
  }
  if (used != value.size())
    throw ConfigError("invalid integer value for '" + key + "': " + value);
  return static_cast<std::size_t>(x);
}

} // namespace detail

inline InitialSpec parse_initial(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = colon == std::string::npos ? text : text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  InitialSpec spec;
  if (head == "experiment1") {
    spec.kind = InitialKind::experiment1;
  } else if (head == "experiment2") {
    spec.kind = InitialKind::experiment2;
  } else if (head == "cosine") {
    spec.kind = InitialKind::cosine_mode;
    spec.mode = detail::parse_size("initial", arg);
  } else if (head == "constant") {
    spec.kind = InitialKind::constant;
    spec.value = detail::parse_double("initial", arg);
  } else if (head == "file") {
    spec.kind = InitialKind::from_file;
    if (arg.empty()) throw ConfigError("initial file path is empty");
    spec.path = arg;
  } else {
    throw ConfigError("unknown initial data '" + text + "'");
  }
  return spec;
}

/// Applies one key=value pair; shared by the config-file reader and the
/// command-line overrides.
inline void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "alpha") cfg.alpha = detail::parse_double(key, value);
  else if (key == "sigma") cfg.sigma = detail::parse_double(key, value);
  else if (key == "n") cfg.n_points = detail::parse_size(key, value);
  else if (key == "tau") cfg.tau = detail::parse_double(key, value);
  else if (key == "t-final") cfg.t_final = detail::parse_double(key, value);
  else if (key == "tol") cfg.series_tolerance = detail::parse_double(key, value);
  else if (key == "fixed-tau") cfg.fixed_tau = detail::parse_double(key, value);
  else if (key == "ladder-min") cfg.ladder_min = detail::parse_size(key, value);
  else if (key == "ladder-max") cfg.ladder_max = detail::parse_size(key, value);
  else if (key == "out") cfg.out = value;
  else if (key == "eigen-out") cfg.eigen_out = value;
  else if (key == "initial") cfg.initial = parse_initial(value);
  else if (key == "method") {
    if (value == "series") cfg.method = AssemblyMethod::series;
    else if (value == "spectral") cfg.method = AssemblyMethod::spectral;
    else throw ConfigError("method must be 'series' or 'spectral', got '" + value + "'");
  } else if (key == "source") {
    if (value == "none") cfg.source = SourceKind::none;
    else if (value == "experiment2") cfg.source = SourceKind::experiment2;
    else throw ConfigError("source must be 'none' or 'experiment2', got '" + value + "'");
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

inline void load_config_stream(RunConfig& cfg, std::istream& in, const std::string& name) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    try {
      apply_key(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  load_config_stream(cfg, in, path);
}

// ---------------------------------------------------------------------------
// CSV formatting: scientific notation, 17 significant digits, LF endings

inline std::string format_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

// ---------------------------------------------------------------------------
// problem setup

inline Vector initial_vector(const RunConfig& cfg, const Grid& grid) {
  const std::size_t n = grid.n_points();
  Vector u(n);
  switch (cfg.initial.kind) {
    case InitialKind::experiment1:
      for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.node(j);
        u[j] = 0.25 * x * x * x * x - 0.5 * x * x;
      }
      break;
    case InitialKind::experiment2:
      for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.node(j);
        u[j] = 2.0 * x * x - (4.0 / 3.0) * x * x * x;
      }
      break;
    case InitialKind::cosine_mode: {
      if (cfg.initial.mode >= n)
        throw ConfigError("cosine mode must be at most N for an N+1 point grid");
      for (std::size_t j = 0; j < n; ++j)
        u[j] = std::cos(static_cast<double>(cfg.initial.mode) * std::numbers::pi * grid.node(j));
      break;
    }
    case InitialKind::constant:
      for (std::size_t j = 0; j < n; ++j) u[j] = cfg.initial.value;
      break;
    case InitialKind::from_file: {
      std::ifstream in(cfg.initial.path);
      if (!in) throw ConfigError("cannot open initial data file '" + cfg.initial.path + "'");
      for (std::size_t j = 0; j < n; ++j)
        if (!(in >> u[j]))
          throw ConfigError("initial data file '" + cfg.initial.path + "' holds fewer than " +
                            std::to_string(n) + " values");
      double extra;
      if (in >> extra)
        throw ConfigError("initial data file '" + cfg.initial.path + "' holds more than " +
                          std::to_string(n) + " values");
      break;
    }
  }
  return u;
}

/// Cosine coefficients of the configured initial data, when known in closed
/// form. The series solves the Neumann problem for the configured (sigma,
/// alpha), so it doubles as the error oracle for any parameter choice.
inline std::optional<CosineSeries> initial_series(const RunConfig& cfg) {
  switch (cfg.initial.kind) {
    case InitialKind::experiment1:
      return CosineSeries(experiment1_series().coefficients(), cfg.sigma, cfg.alpha);
    case InitialKind::experiment2:
      return CosineSeries(experiment2_series().coefficients(), cfg.sigma, cfg.alpha);
    case InitialKind::cosine_mode: {
      std::vector<double> f(cfg.initial.mode + 1, 0.0);
      f[cfg.initial.mode] = 1.0;
      return CosineSeries(std::move(f), cfg.sigma, cfg.alpha);
    }
    case InitialKind::constant:
      return CosineSeries({cfg.initial.value}, cfg.sigma, cfg.alpha);
    case InitialKind::from_file:
      return std::nullopt;
  }
  return std::nullopt;
}

/// Analytic solution at the grid nodes at time t, or nullopt when the initial
/// data has no closed-form series.
inline std::optional<Vector> reference_solution(const RunConfig& cfg, const Grid& grid, double t) {
  const auto series = initial_series(cfg);
  if (!series) return std::nullopt;
  Vector ref = series->sample(grid, t);
  if (cfg.source == SourceKind::experiment2) {
    const double mu = cfg.sigma * std::pow(std::numbers::pi, cfg.alpha);
    const double factor = duhamel_source_factor(t, mu);
    for (std::size_t j = 0; j < grid.n_points(); ++j)
      ref[j] += factor * std::cos(std::numbers::pi * grid.node(j));
  }
  return ref;
}

inline SourceSpec make_source(const Grid& grid) {
  SourceSpec src;
  src.time_factor = [](double t) { return std::exp(-t); };
  src.space_profile.resize(grid.n_points());
  for (std::size_t j = 0; j < grid.n_points(); ++j)
    src.space_profile[j] = std::cos(std::numbers::pi * grid.node(j));
  return src;
}

inline OperatorMatrix build_operator(const RunConfig& cfg, const Grid& grid) {
  const RieszParams params(FractionalOrder(cfg.alpha), cfg.sigma);
  return cfg.method == AssemblyMethod::series
             ? assemble_series(params, grid, cfg.series_tolerance)
             : assemble_spectral(params, grid);
}

/// Final state of the configured problem on the given grid and time step.
inline Vector solve_final_state(const RunConfig& cfg, const Grid& grid,
                                const StepperConfig& stepping) {
  const OperatorMatrix op = build_operator(cfg, grid);
  const Vector u0 = initial_vector(cfg, grid);
  if (cfg.source == SourceKind::none)
    return step_homogeneous(op, u0, stepping).final_state();
  return solve_inhomogeneous_duhamel(op, u0, make_source(grid), stepping);
}

// ---------------------------------------------------------------------------
// convergence study

struct ConvergenceRow {
  std::size_t n_points;
  double h;
  double tau;
  double error;
  std::optional<double> rate; // empty on the coarsest rung
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
};

/// Worker cap: FRADEX_THREADS when set, hardware concurrency otherwise.
inline std::size_t worker_cap() {
  if (const char* env = std::getenv("FRADEX_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs the (h, tau) ladder, doubling resolution each rung; rungs execute
/// concurrently, the report is assembled in h order afterwards.
inline ConvergenceReport run_convergence(const RunConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> ladder;
  for (std::size_t n = cfg.ladder_min; n <= cfg.ladder_max; n *= 2) ladder.push_back(n);

  std::vector<ConvergenceRow> rows(ladder.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= ladder.size()) return;
      try {
        const std::size_t n = ladder[i];
        const Grid grid(n);
        const double tau = cfg.fixed_tau > 0.0 ? cfg.fixed_tau : grid.spacing();
        const StepperConfig stepping(tau, cfg.t_final);
        const Vector u = solve_final_state(cfg, grid, stepping);
        const auto ref = reference_solution(cfg, grid, cfg.t_final);
        if (!ref)
          throw ConfigError("convergence study needs initial data with a closed-form oracle");
        double err = 0.0;
        for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(u[j] - (*ref)[j]));
        rows[i] = ConvergenceRow{n, grid.spacing(), tau, err, std::nullopt};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const std::size_t n_workers = std::min(worker_cap(), ladder.size());
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 1; i < rows.size(); ++i)
    rows[i].rate = std::log2(rows[i - 1].error / rows[i].error);
  return ConvergenceReport{std::move(rows)};
}

inline void write_convergence_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "h,tau,max_norm_error,rate\n";
  for (const auto& row : report.rows) {
    out << format_sci(row.h) << ',' << format_sci(row.tau) << ',' << format_sci(row.error)
        << ',';
    if (row.rate) out << format_sci(*row.rate);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// single solve

struct SolveSummary {
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double mass_drift = 0.0; // relative to the initial mass
  double flux_left = 0.0;
  double flux_right = 0.0;
  std::optional<double> oracle_error;
};

inline void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << 't';
  for (std::size_t j = 0; j < traj.grid.n_points(); ++j) out << ",x_" << j;
  out << '\n';
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    out << format_sci(traj.times[s]);
    for (double v : traj.states[s]) out << ',' << format_sci(v);
    out << '\n';
  }
}

/// Runs the configured problem once and writes the trajectory CSV. With a
/// source the Duhamel recombination yields the final state only, so the
/// trajectory holds the initial and final rows.
inline SolveSummary run_solve(const RunConfig& cfg, std::ostream& trajectory_csv) {
  cfg.validate();
  const Grid grid(cfg.n_points);
  const StepperConfig stepping(cfg.tau, cfg.t_final);
  const OperatorMatrix op = build_operator(cfg, grid);
  const Vector u0 = initial_vector(cfg, grid);

  Trajectory traj{{}, {}, grid};
  if (cfg.source == SourceKind::none) {
    traj = step_homogeneous(op, u0, stepping);
  } else {
    traj.times = {0.0, cfg.t_final};
    traj.states = {u0, solve_inhomogeneous_duhamel(op, u0, make_source(grid), stepping)};
  }
  write_trajectory_csv(traj, trajectory_csv);

  SolveSummary summary;
  const Vector& uf = traj.final_state();
  summary.mass_initial = mass(grid, u0);
  summary.mass_final = mass(grid, uf);
  const double scale = std::max(std::abs(summary.mass_initial), 1e-300);
  summary.mass_drift = std::abs(summary.mass_final - summary.mass_initial) / scale;
  if (grid.n_points() >= 3) {
    summary.flux_left = boundary_flux(uf, grid, Wall::left);
    summary.flux_right = boundary_flux(uf, grid, Wall::right);
  }
  if (const auto ref = reference_solution(cfg, grid, cfg.t_final)) {
    double err = 0.0;
    for (std::size_t j = 0; j < grid.n_points(); ++j)
      err = std::max(err, std::abs(uf[j] - (*ref)[j]));
    summary.oracle_error = err;
  }
  return summary;
}

// ---------------------------------------------------------------------------
// operator diagnostics

struct MatrixCheck {
  std::string name;
  double value; // measured quantity
  double bound; // tolerance it is held against
  bool pass;
};

struct MatrixReport {
  std::vector<MatrixCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline void write_matrix_csv(const DenseMatrix& a, std::ostream& out) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << format_sci(a(i, j));
    }
    out << '\n';
  }
}

inline void write_eigenvalue_csv(const EigenSystem& es, std::ostream& out) {
  out << "k,lambda_k\n";
  for (std::size_t k = 0; k < es.eigenvalues.size(); ++k)
    out << k << ',' << format_sci(es.eigenvalues[k]) << '\n';
}

/// Assembles the operator both ways, dumps matrix and eigenvalues, and checks
/// the structural properties: sign pattern, row/column sums, eigen residuals,
/// cross-method agreement, centro-symmetry.
inline MatrixReport run_matrix(const RunConfig& cfg, std::ostream& matrix_csv,
                               std::ostream& eigen_csv) {
  cfg.validate();
  const Grid grid(cfg.n_points);
  const RieszParams params(FractionalOrder(cfg.alpha), cfg.sigma);
  const OperatorMatrix primary = build_operator(cfg, grid);
  const OperatorMatrix other = cfg.method == AssemblyMethod::series
                                   ? assemble_spectral(params, grid)
                                   : assemble_series(params, grid, cfg.series_tolerance);
  const EigenSystem es = eigen_system(params, grid);

  write_matrix_csv(primary.a, matrix_csv);
  write_eigenvalue_csv(es, eigen_csv);

  const std::size_t n = grid.n_points();
  const double c_over_h =
      params.c_sigma() / std::pow(grid.spacing(), params.alpha().value());
  const double a_norm = inf_norm(primary.a);
  const double sum_bound = cfg.method == AssemblyMethod::series
                               ? 2.0 * c_over_h * cfg.series_tolerance
                               : 1e-10 * a_norm;
  const double offdiag_bound =
      cfg.method == AssemblyMethod::series ? 0.0 : 1e-10 * a_norm;

  MatrixReport report;
  auto add = [&](const std::string& name, double value, double bound) {
    report.checks.push_back({name, value, bound, value <= bound});
  };

  double max_diag = -std::numeric_limits<double>::infinity();
  double min_offdiag = std::numeric_limits<double>::infinity();
  double max_row = 0.0, max_col = 0.0, max_centro = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    double col_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row_sum += primary.a(i, j);
      col_sum += primary.a(j, i);
      if (i == j) max_diag = std::max(max_diag, primary.a(i, j));
      else min_offdiag = std::min(min_offdiag, primary.a(i, j));
      max_centro = std::max(max_centro,
                            std::abs(primary.a(i, j) - primary.a(n - 1 - i, n - 1 - j)));
    }
    max_row = std::max(max_row, std::abs(row_sum));
    max_col = std::max(max_col, std::abs(col_sum));
  }
  // single-cell grids have no off-diagonal and a zero diagonal
  if (n > 1) {
    report.checks.push_back({"diagonal_negative", max_diag, 0.0, max_diag < 0.0});
    add("offdiagonal_nonnegative", -min_offdiag, offdiag_bound);
  }
  add("row_sums", max_row, sum_bound);
  add("column_sums", max_col, sum_bound);

  double max_resid = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    max_resid = std::max(max_resid, eigen_residual(primary, es, k));
  add("eigen_residual_relative", a_norm > 0.0 ? max_resid / a_norm : max_resid, 1e-8);

  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double diff_row = 0.0;
    for (std::size_t j = 0; j < n; ++j) diff_row += std::abs(primary.a(i, j) - other.a(i, j));
    cross = std::max(cross, diff_row);
  }
  add("cross_method_difference", cross, 4.0 * c_over_h * cfg.series_tolerance);

  add("centro_symmetry", max_centro, 1e-12 * std::max(max_abs_entry(primary.a), 1.0));
  return report;
}

// ---------------------------------------------------------------------------
// boundary-derivative diagnostic

struct FluxRow {
  std::size_t n_points;
  double h;
  double abs_flux;
};

/// One row per ladder rung: the magnitude of the one-sided wall-derivative
/// approximation at the left wall at t_final.
inline std::vector<FluxRow> run_flux(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.ladder_min < 3)
    throw ConfigError("flux ladder needs at least three nodes per rung");
  std::vector<FluxRow> rows;
  for (std::size_t n = cfg.ladder_min; n <= cfg.ladder_max; n *= 2) {
    const Grid grid(n);
    const double tau = cfg.fixed_tau > 0.0 ? cfg.fixed_tau : grid.spacing();
    const StepperConfig stepping(tau, cfg.t_final);
    const Vector u = solve_final_state(cfg, grid, stepping);
    rows.push_back({n, grid.spacing(), std::abs(boundary_flux(u, grid, Wall::left))});
  }
  return rows;
}

inline void write_flux_csv(const std::vector<FluxRow>& rows, std::ostream& out) {
  out << "n,h,abs_flux\n";
  for (const auto& row : rows)
    out << row.n_points << ',' << format_sci(row.h) << ',' << format_sci(row.abs_flux) << '\n';
}

} // namespace fradex::harness

#endif
