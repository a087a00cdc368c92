// qpiston: plans, certifies, and simulates minimum-time expansions of the
// quantum piston. Subcommands: plan, sweep, simulate, otto, certify.

#include "qpiston/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
  using namespace qpiston::cli;

  CLI::App app{"Minimum-time quantum piston toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key = value configuration file; flags override it");

  RunConfig cfg;
  std::string outdir = ".";
  std::string format = "csv";
  std::string units = "normalized";

  app.add_option("--outdir", outdir, "Output directory (env: QPISTON_OUTDIR)")
      ->envname("QPISTON_OUTDIR");
  app.add_option("--format", format, "Table format for data files")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--units", units, "Unit mode for inputs and outputs")
      ->check(CLI::IsMember({"normalized", "physical"}));
  app.add_option("--mass", cfg.units.mass, "Particle mass (physical mode)");
  app.add_option("--stiffness", cfg.units.stiffness,
                 "Stiffness bound k0 (physical mode)");
  app.add_option("--width", cfg.units.width, "Initial box width a0 (physical mode)");

  app.add_option("--gamma", cfg.gamma, "Expansion factor (> 1)");
  app.add_option("--method", cfg.method, "Plan family")
      ->check(CLI::IsMember({"optimal", "inverse"}));
  app.add_option("--duration", cfg.duration,
                 "Inverse-plan duration; 0 selects the minimum feasible");
  app.add_option("--ramp-delta", cfg.ramp_delta,
                 "Replace control jumps by linear ramps of this duration");
  app.add_option("--samples", cfg.trajectory_samples,
                 "Rows in the control/trajectory tables");

  app.add_option("--gamma-min", cfg.gamma_min, "Sweep range start (> 1)");
  app.add_option("--gamma-max", cfg.gamma_max, "Sweep range end");
  app.add_option("--points", cfg.sweep_points, "Sweep point count");
  app.add_flag("--log-spacing,!--linear-spacing", cfg.log_spacing,
               "Sweep spacing (default log)");

  app.add_option("--grid", cfg.grid_size, "Spatial grid size N");
  app.add_option("--dt", cfg.dt, "Time step of the grid solver");
  app.add_option("--modes", cfg.modes,
                 "Initial state: equal superposition of these modes");
  app.add_flag("--snapshot", cfg.snapshot, "Also write the final wavefunction");

  app.add_option("--tau-h", cfg.tau_h, "Hot reservoir temperature");
  app.add_option("--tau-c", cfg.tau_c, "Cold reservoir temperatures (one or more)");
  app.add_option("--curve-points", cfg.curve_points, "Rows of the rate curve per tau-c");
  app.add_option("--gamma-cap", cfg.gamma_max_search,
                 "Upper end of the rate maximization range");

  auto* plan = app.add_subcommand("plan", "Synthesize one expansion plan");
  auto* sweep = app.add_subcommand("sweep", "Expansion times across a gamma range");
  auto* simulate =
      app.add_subcommand("simulate", "Grid solution of the driven box dynamics");
  auto* otto = app.add_subcommand("otto", "Otto refrigerator rates and bound");
  auto* certify =
      app.add_subcommand("certify", "Maximum-principle certificate plus oracle");
  for (auto* sub : {plan, sweep, simulate, otto, certify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadConfig;
  }

  cfg.outdir = outdir;
  cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  cfg.unit_mode = units == "physical" ? UnitMode::Physical : UnitMode::Normalized;

  try {
    if (plan->parsed()) return run_plan(cfg);
    if (sweep->parsed()) return run_sweep(cfg);
    if (simulate->parsed()) return run_simulate(cfg);
    if (otto->parsed()) return run_otto(cfg);
    if (certify->parsed()) return run_certify(cfg);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitBadConfig;
}
