#pragma once

// Command-line front end: one RunConfig shared by all subcommands, a simple
// key=value config-file loader, and one entry point per subcommand. Each
// entry point writes its output files under config.outdir and returns a
// process exit code (kExitOk / kExitBadConfig / kExitInfeasible).

#include <filesystem>
#include <string>
#include <vector>

namespace qpiston::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadConfig = 2;  // invalid parameters or config file
inline constexpr int kExitInfeasible = 3; // valid inputs, infeasible physics

enum class OutputFormat { Csv, Json };

enum class UnitMode { Normalized, Physical };

/// Physical scales (mass m, stiffness bound k0, initial width a0) used when
/// unit_mode == Physical. Times scale by sqrt(m/k0), lengths by a0,
/// stiffness by k0, energies by hbar/sqrt(m/k0) with hbar = 1.
struct UnitSystem {
  double mass = 1.0;
  double stiffness = 1.0;
  double width = 1.0;

  double time_scale() const;
  double energy_scale() const;
};

struct RunConfig {
  std::filesystem::path outdir = ".";
  OutputFormat format = OutputFormat::Csv;
  UnitMode unit_mode = UnitMode::Normalized;
  UnitSystem units{};

  // plan / simulate / certify
  double gamma = 10.0;
  std::string method = "optimal";  // optimal | inverse
  double duration = 0.0;           // inverse plans: 0 selects the minimum feasible
  double ramp_delta = 0.0;         // 0 = ideal bangs
  int trajectory_samples = 2001;

  // sweep
  double gamma_min = 1.1;
  double gamma_max = 10.0;
  int sweep_points = 50;
  bool log_spacing = true;

  // simulate
  int grid_size = 512;
  double dt = 1e-4;
  std::vector<int> modes = {1};
  bool snapshot = false;

  // otto
  double tau_h = 1.0;
  std::vector<double> tau_c = {1e-2};
  int curve_points = 200;
  double gamma_max_search = 1e6;

  /// Throws std::invalid_argument on any violated invariant (non-positive
  /// physical parameter, empty range, unknown method, ...).
  void validate() const;
};

/// plan_summary.json, plan_control.csv, plan_trajectory.csv
int run_plan(const RunConfig& config);

/// sweep.csv: gamma, T_optimal, T_inverse
int run_sweep(const RunConfig& config);

/// simulate_summary.json, fidelity.csv, and final_state.csv when snapshot
/// is requested.
int run_simulate(const RunConfig& config);

/// otto_bound.csv (one row per tau_c) and otto_rate_curve.csv.
int run_otto(const RunConfig& config);

/// certify.json: closed-form solution + PMP certificate + brute-force
/// oracle comparison. Returns kExitInfeasible if either check fails.
int run_certify(const RunConfig& config);

}  // namespace qpiston::cli
