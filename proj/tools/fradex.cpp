// Command-line front end: solve | convergence | matrix | flux.
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fradex/harness.hpp"

namespace {

using fradex::harness::ConfigError;
using fradex::harness::RunConfig;

struct CliOverrides {
  std::map<std::string, std::string> values;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  return out;
}

int cmd_solve(const RunConfig& cfg) {
  const std::string path = cfg.out.empty() ? "trajectory.csv" : cfg.out;
  std::ofstream csv = open_output(path);
  const auto summary = fradex::harness::run_solve(cfg, csv);
  std::cout << "trajectory: " << path << '\n'
            << "mass initial: " << fradex::harness::format_sci(summary.mass_initial) << '\n'
            << "mass final:   " << fradex::harness::format_sci(summary.mass_final) << '\n'
            << "mass drift:   " << fradex::harness::format_sci(summary.mass_drift) << '\n'
            << "flux left:    " << fradex::harness::format_sci(summary.flux_left) << '\n'
            << "flux right:   " << fradex::harness::format_sci(summary.flux_right) << '\n';
  if (summary.oracle_error)
    std::cout << "max-norm error vs analytic solution: "
              << fradex::harness::format_sci(*summary.oracle_error) << '\n';
  return 0;
}

int cmd_convergence(const RunConfig& cfg) {
  const auto report = fradex::harness::run_convergence(cfg);
  const std::string path = cfg.out.empty() ? "convergence.csv" : cfg.out;
  std::ofstream csv = open_output(path);
  fradex::harness::write_convergence_csv(report, csv);
  std::printf("%-10s %-10s %-24s %s\n", "h", "tau", "max_norm_error", "rate");
  for (const auto& row : report.rows) {
    std::printf("1/%-8zu %-10.6g %-24.16e ", row.n_points, row.tau, row.error);
    if (row.rate) std::printf("%.4f\n", *row.rate);
    else std::printf("-\n");
  }
  std::cout << "report: " << path << '\n';
  return 0;
}

int cmd_matrix(const RunConfig& cfg) {
  const std::string a_path = cfg.out.empty() ? "matrix.csv" : cfg.out;
  const std::string e_path = cfg.eigen_out.empty() ? "eigenvalues.csv" : cfg.eigen_out;
  std::ofstream a_csv = open_output(a_path);
  std::ofstream e_csv = open_output(e_path);
  const auto report = fradex::harness::run_matrix(cfg, a_csv, e_csv);
  for (const auto& check : report.checks)
    std::printf("%-26s %s  value %.3e  bound %.3e\n", check.name.c_str(),
                check.pass ? "PASS" : "FAIL", check.value, check.bound);
  std::cout << "matrix: " << a_path << "  eigenvalues: " << e_path << '\n';
  return report.all_pass() ? 0 : 2;
}

int cmd_flux(const RunConfig& cfg) {
  const auto rows = fradex::harness::run_flux(cfg);
  const std::string path = cfg.out.empty() ? "flux.csv" : cfg.out;
  std::ofstream csv = open_output(path);
  fradex::harness::write_flux_csv(rows, csv);
  for (const auto& row : rows)
    std::printf("n %-6zu h %-12.6g |flux| %.10e\n", row.n_points, row.h, row.abs_flux);
  std::cout << "report: " << path << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver for the 1D space-fractional diffusion equation with "
               "homogeneous Neumann boundary conditions"};
  app.require_subcommand(1);

  std::string config_path;
  CliOverrides overrides;
  app.add_option("--config", config_path, "Flat key = value configuration file");

  // every flag funnels through the same key=value channel as the config file
  auto add_override = [&](CLI::App* cmd, const std::string& flag, const std::string& key,
                          const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&overrides, key](const std::string& v) { overrides.values[key] = v; }, help);
  };

  std::vector<CLI::App*> commands;
  CLI::App* solve = app.add_subcommand("solve", "Run one problem and dump the trajectory");
  CLI::App* convergence =
      app.add_subcommand("convergence", "Run an (h, tau) refinement ladder");
  CLI::App* matrix =
      app.add_subcommand("matrix", "Dump the operator, its eigenvalues, and a property report");
  CLI::App* flux = app.add_subcommand("flux", "Wall-derivative magnitude over an N ladder");
  commands = {solve, convergence, matrix, flux};

  for (CLI::App* cmd : commands) {
    cmd->fallthrough(); // app-level flags may follow the subcommand
    add_override(cmd, "--alpha", "alpha", "Fractional order in (1, 2]");
    add_override(cmd, "--sigma", "sigma", "Diffusion intensity (> 0)");
    add_override(cmd, "--n", "n", "Number of grid cells N+1");
    add_override(cmd, "--tau", "tau", "Time step");
    add_override(cmd, "--t-final", "t-final", "Final time");
    add_override(cmd, "--method", "method", "Operator assembly: series | spectral");
    add_override(cmd, "--tol", "tol", "Series truncation tolerance");
    add_override(cmd, "--out", "out", "Primary output CSV path");
    add_override(cmd, "--initial", "initial",
                 "experiment1 | experiment2 | cosine:K | constant:C | file:PATH");
    add_override(cmd, "--source", "source", "none | experiment2");
  }
  add_override(matrix, "--eigen-out", "eigen-out", "Eigenvalue CSV path");
  for (CLI::App* cmd : {convergence, flux}) {
    add_override(cmd, "--ladder-min", "ladder-min", "Coarsest rung (cells)");
    add_override(cmd, "--ladder-max", "ladder-max", "Finest rung (cells)");
    add_override(cmd, "--fixed-tau", "fixed-tau",
                 "Fixed time step for every rung (0: tau = h)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) fradex::harness::load_config_file(cfg, config_path);
    for (const auto& [key, value] : overrides.values)
      fradex::harness::apply_key(cfg, key, value);
    cfg.validate();

    if (solve->parsed()) return cmd_solve(cfg);
    if (convergence->parsed()) return cmd_convergence(cfg);
    if (matrix->parsed()) return cmd_matrix(cfg);
    return cmd_flux(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}
