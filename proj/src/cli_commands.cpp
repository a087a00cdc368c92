#include "qpiston/cli.hpp"

#include "qpiston/dynamics.hpp"
#include "qpiston/inverse.hpp"
#include "qpiston/io.hpp"
#include "qpiston/optimal.hpp"
#include "qpiston/quantum.hpp"
#include "qpiston/thermo.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <iostream>
#include <thread>

namespace qpiston::cli {

using nlohmann::json;

double UnitSystem::time_scale() const { return std::sqrt(mass / stiffness); }

// Energies keep hbar = 1; the scale follows from hbar^2 / (m a0^2).
double UnitSystem::energy_scale() const { return 1.0 / (mass * width * width); }

void RunConfig::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string(name) + " must be a positive number");
  };
  positive(units.mass, "mass");
  positive(units.stiffness, "stiffness");
  positive(units.width, "width");
  positive(gamma, "gamma");
  if (method != "optimal" && method != "inverse")
    throw std::invalid_argument("method must be 'optimal' or 'inverse'");
  if (!(duration >= 0.0) || !std::isfinite(duration))
    throw std::invalid_argument("duration must be >= 0");
  if (!(ramp_delta >= 0.0) || !std::isfinite(ramp_delta))
    throw std::invalid_argument("ramp-delta must be >= 0");
  if (trajectory_samples < 2)
    throw std::invalid_argument("samples must be at least 2");
  positive(gamma_min, "gamma-min");
  positive(gamma_max, "gamma-max");
  if (gamma_max < gamma_min) throw std::invalid_argument("gamma range is empty");
  if (sweep_points < 1) throw std::invalid_argument("points must be at least 1");
  if (grid_size < 8) throw std::invalid_argument("grid must be at least 8");
  positive(dt, "dt");
  if (modes.empty()) throw std::invalid_argument("modes list is empty");
  for (int n : modes)
    if (n < 1) throw std::invalid_argument("mode indices start at 1");
  positive(tau_h, "tau-h");
  if (tau_c.empty()) throw std::invalid_argument("tau-c list is empty");
  for (double t : tau_c) positive(t, "tau-c");
  if (curve_points < 2) throw std::invalid_argument("curve-points must be at least 2");
  positive(gamma_max_search, "gamma-cap");
}

namespace {

// Multipliers applied on output (and divided out of physical-time inputs).
struct Scales {
  double time = 1.0;
  double length = 1.0;
  double rate = 1.0;
  double stiffness = 1.0;
  double energy = 1.0;
  double inv_time = 1.0;
};

Scales make_scales(const RunConfig& c) {
  Scales s;
  if (c.unit_mode == UnitMode::Physical) {
    s.time = c.units.time_scale();
    s.length = c.units.width;
    s.rate = s.length / s.time;
    s.stiffness = c.units.stiffness;
    s.energy = c.units.energy_scale();
    s.inv_time = 1.0 / s.time;
  }
  return s;
}

json units_json(const RunConfig& c, const Scales& s) {
  return json{{"mode", c.unit_mode == UnitMode::Physical ? "physical" : "normalized"},
              {"time_scale", s.time},
              {"length_scale", s.length},
              {"stiffness_scale", s.stiffness}};
}

void emit_table(const RunConfig& c, const std::string& stem, const CsvTable& table) {
  if (c.format == OutputFormat::Csv) {
    table.write(c.outdir / (stem + ".csv"));
  } else {
    write_json(c.outdir / (stem + ".json"),
               json{{"columns", table.columns}, {"rows", table.rows}});
  }
}

// Durations arrive in the active unit system; internally everything runs in
// normalized time.
ExpansionPlan build_plan(const RunConfig& c, const Scales& s) {
  if (c.method == "inverse") {
    if (c.ramp_delta > 0.0)
      throw std::invalid_argument("ramps apply to the bang-bang plan only");
    return inverse_expansion_plan(c.gamma, c.duration / s.time);
  }
  if (c.duration > 0.0)
    throw std::invalid_argument("the optimal plan fixes its own duration");
  const OptimalSolution sol = solve_optimal(c.gamma);
  if (c.ramp_delta > 0.0) return ramped_plan(sol, c.ramp_delta / s.time);
  return optimal_expansion_plan(sol);
}

}  // namespace

int run_plan(const RunConfig& c) {
  c.validate();
  const Scales s = make_scales(c);
  std::filesystem::create_directories(c.outdir);
  const ExpansionPlan plan = build_plan(c, s);

  const bool inverse = plan.method == PlanMethod::Inverse;
  CsvTable control{inverse ? std::vector<std::string>{"t", "tau", "u"}
                           : std::vector<std::string>{"t", "u"},
                   {}};
  CsvTable trajectory{{"t", "x1", "x2"}, {}};
  const int n = c.trajectory_samples;
  for (int i = 0; i < n; ++i) {
    // Land on the horizon exactly: rounding must not push the final sample
    // past it (the boundary control is 0 outside [0, T]).
    const double t = (i == n - 1) ? plan.duration : plan.duration * i / (n - 1);
    const State x = plan.state(t);
    if (inverse)
      control.add_row({t * s.time, t / plan.duration, plan.control(t) * s.stiffness});
    else
      control.add_row({t * s.time, plan.control(t) * s.stiffness});
    trajectory.add_row({t * s.time, x(0) * s.length, x(1) * s.rate});
  }
  emit_table(c, "plan_control", control);
  emit_table(c, "plan_trajectory", trajectory);

  json summary;
  if (plan.method == PlanMethod::Optimal) {
    const OptimalSolution sol = solve_optimal(c.gamma);
    PMPCertificate cert = build_certificate(sol);
    OptimalSolution scaled = sol;
    scaled.t_x *= s.time;
    scaled.t_y *= s.time;
    scaled.total *= s.time;
    scaled.switch_state = State(sol.switch_state(0) * s.length, sol.switch_state(1) * s.rate);
    for (double& z : cert.phi_zero_times) z *= s.time;
    summary = plan_summary_json(scaled, cert);
    summary["method"] = "optimal";
  } else if (plan.method == PlanMethod::Inverse) {
    const double t_min = min_feasible_duration(c.gamma);
    const double peak = peak_control_magnitude(c.gamma);
    summary = json{{"gamma", c.gamma},
                   {"method", "inverse"},
                   {"total", plan.duration * s.time},
                   {"min_feasible_total", t_min * s.time},
                   {"min_control", -peak / (plan.duration * plan.duration) * s.stiffness},
                   {"peak_control_location", peak_control_location(c.gamma)}};
  } else {
    const State end = plan.state(plan.duration);
    summary = json{{"gamma", c.gamma},
                   {"method", "optimal"},
                   {"ramp_delta", c.ramp_delta},
                   {"total", plan.duration * s.time},
                   {"endpoint", {end(0) * s.length, end(1) * s.rate}},
                   {"endpoint_miss", plan_endpoint_miss(plan) * s.length}};
  }
  summary["units"] = units_json(c, s);
  write_json(c.outdir / "plan_summary.json", summary);
  return kExitOk;
}

int run_sweep(const RunConfig& c) {
  c.validate();
  if (!(c.gamma_min > 1.0))
    throw std::invalid_argument("sweep range must start above gamma = 1");
  const Scales s = make_scales(c);
  std::filesystem::create_directories(c.outdir);

  const int n = c.sweep_points;
  std::vector<double> gammas(n);
  for (int i = 0; i < n; ++i) {
    const double f = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    gammas[i] = c.log_spacing
                    ? c.gamma_min * std::pow(c.gamma_max / c.gamma_min, f)
                    : c.gamma_min + (c.gamma_max - c.gamma_min) * f;
  }

  // Rows are independent; compute them in chunked tasks and write once.
  std::vector<std::array<double, 3>> rows(n);
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers = static_cast<int>(std::min<unsigned>(hw > 0 ? hw : 1, n));
  const int chunk = (n + workers - 1) / workers;
  std::vector<std::future<void>> tasks;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    tasks.push_back(std::async(std::launch::async, [&gammas, &rows, lo, hi] {
      for (int i = lo; i < hi; ++i)
        rows[i] = {gammas[i], solve_optimal(gammas[i]).total,
                   min_feasible_duration(gammas[i])};
    }));
  }
  for (auto& t : tasks) t.get();

  CsvTable table{{"gamma", "T_optimal", "T_inverse"}, {}};
  for (const auto& r : rows) table.add_row({r[0], r[1] * s.time, r[2] * s.time});
  emit_table(c, "sweep", table);
  return kExitOk;
}

int run_simulate(const RunConfig& c) {
  c.validate();
  const Scales s = make_scales(c);
  std::filesystem::create_directories(c.outdir);

  const ExpansionPlan plan = build_plan(c, s);
  const SchrodingerProblem problem = slaved_problem(plan);
  const ModeExpansion modes = equal_superposition(c.modes);
  const int n_modes = modes.max_mode();

  WaveFunction psi = exact_state(modes, 1.0, 0.0, Eigen::VectorXd::Zero(n_modes),
                                 c.grid_size);

  // Reference: the exact scaling solution of the ideal (unramped) plan at its
  // final time; the ramped run approximates it with the same total duration.
  const ExpansionPlan ref_plan =
      (plan.method == PlanMethod::Custom) ? optimal_expansion_plan(c.gamma) : plan;
  const Eigen::VectorXd theta_T =
      mode_phase_integrals(ref_plan, n_modes, ref_plan.duration);
  const double a_T = c.gamma;
  const auto target_fidelity = [&](const WaveFunction& w) {
    Complex acc(0.0, 0.0);
    for (int m = 1; m <= n_modes; ++m) {
      if (modes.c(m - 1) == Complex(0.0, 0.0)) continue;
      const Complex ref_coeff = modes.c(m - 1) * std::exp(Complex(0.0, -theta_T(m - 1)));
      acc += std::conj(ref_coeff) * overlap_with_eigenstate(w, m, a_T);
    }
    return std::norm(acc);
  };

  CsvTable fid{{"t", "fidelity"}, {}};
  fid.add_row({0.0, target_fidelity(psi)});

  EvolveOptions eopts;
  eopts.dt = c.dt / s.time;
  const long est_steps = std::max(1L, std::lround(std::ceil(plan.duration / eopts.dt)));
  eopts.observer_stride = static_cast<int>(std::max(1L, est_steps / 200));
  EvolveStats stats;
  const double e0 = mean_energy(psi);
  const WaveFunction final_state =
      evolve_pde(psi, problem, plan.duration, eopts, &stats,
                 [&](const WaveFunction& w) {
                   fid.add_row({w.time * s.time, target_fidelity(w)});
                 });
  emit_table(c, "fidelity", fid);

  const double f_final = target_fidelity(final_state);
  const int n_pop = std::max(4, n_modes + 2);
  const Eigen::VectorXd pops = mode_populations(final_state, n_pop);
  const double e1 = mean_energy(final_state);

  json summary{{"gamma", c.gamma},
               {"method", c.method},
               {"ramp_delta", c.ramp_delta},
               {"grid_size", c.grid_size},
               {"dt", c.dt},
               {"modes", c.modes},
               {"total", plan.duration * s.time},
               {"final_fidelity", f_final},
               {"final_populations", std::vector<double>(pops.data(), pops.data() + n_pop)},
               {"initial_energy", e0 * s.energy},
               {"final_energy", e1 * s.energy},
               {"energy_ratio", e1 / e0},
               {"norm_drift", stats.norm_drift},
               {"steps", stats.steps},
               {"resolution_ok", stats.resolution_ok},
               {"max_dt_omega", stats.max_dt_omega},
               {"suggested_dt", stats.suggested_dt * s.time},
               {"units", units_json(c, s)}};
  write_json(c.outdir / "simulate_summary.json", summary);

  if (c.snapshot) {
    CsvTable snap{{"x", "re_psi", "im_psi", "density"}, {}};
    const double w = final_state.width;
    const double hy = final_state.grid_step();
    const double amp_scale = 1.0 / std::sqrt(w * s.length);
    for (int j = 0; j < final_state.grid_size(); ++j) {
      const double x = w * (j + 1) * hy;
      const Complex phase =
          std::exp(Complex(0.0, 0.5 * final_state.width_rate * x * x / w));
      const Complex v = final_state.values(j) * phase * amp_scale;
      snap.add_row({x * s.length, v.real(), v.imag(), std::norm(v)});
    }
    emit_table(c, "final_state", snap);
  }

  if (!stats.resolution_ok) {
    std::cerr << "simulate: time step too coarse for the tracked modes "
                 "(dt * omega_max = "
              << stats.max_dt_omega << "); suggested dt <= "
              << stats.suggested_dt * s.time << "\n";
    return kExitBadConfig;
  }
  return kExitOk;
}

int run_otto(const RunConfig& c) {
  c.validate();
  const Scales s = make_scales(c);
  std::filesystem::create_directories(c.outdir);
  const ExpansionTimeModel model = c.method == "inverse" ? ExpansionTimeModel::Inverse
                                                         : ExpansionTimeModel::Optimal;

  CsvTable bound{{"tau_c", "gamma_min", "gamma_star", "R_star", "bound"}, {}};
  CsvTable curve{{"tau_c", "gamma", "rate"}, {}};
  for (const double tau : c.tau_c) {
    if (!(tau < c.tau_h))
      throw std::invalid_argument("every tau-c must lie below tau-h");
    const double g0 = feasibility_boundary(tau, c.tau_h);
    const MaxRateResult r = max_cooling_rate(tau, c.tau_h, model, c.gamma_max_search);
    bound.add_row({tau, g0, r.gamma_star, r.rate_star * s.inv_time,
                   r.bound * s.inv_time});

    const double g_hi = std::max(100.0 * g0, 10.0 * r.gamma_star);
    for (int k = 1; k <= c.curve_points; ++k) {
      const double g = g0 * std::pow(g_hi / g0, static_cast<double>(k) / c.curve_points);
      const double rate = cooling_rate({tau, c.tau_h, g}, model);
      curve.add_row({tau, g, rate * s.inv_time});
    }
  }
  emit_table(c, "otto_bound", bound);
  emit_table(c, "otto_rate_curve", curve);
  return kExitOk;
}

int run_certify(const RunConfig& c) {
  c.validate();
  const Scales s = make_scales(c);
  std::filesystem::create_directories(c.outdir);

  const OptimalSolution sol = solve_optimal(c.gamma);
  PMPCertificate cert = build_certificate(sol);

  BruteForceOptions bopts;
  const BruteForceResult oracle = brute_force_min_time(c.gamma, bopts);
  const double allowance = bopts.grid_step + bopts.endpoint_tol;
  const bool oracle_ok = oracle.feasible &&
                         std::abs(oracle.duration - sol.total) <= allowance &&
                         oracle.effective_switches == 1;
  const bool pass = cert.pass && oracle_ok;

  OptimalSolution scaled = sol;
  scaled.t_x *= s.time;
  scaled.t_y *= s.time;
  scaled.total *= s.time;
  scaled.switch_state =
      State(sol.switch_state(0) * s.length, sol.switch_state(1) * s.rate);
  PMPCertificate cert_scaled = cert;
  for (double& z : cert_scaled.phi_zero_times) z *= s.time;

  json doc = plan_summary_json(scaled, cert_scaled);
  doc["certificate"]["violations"] = cert.violations;
  doc["oracle"] = json{{"feasible", oracle.feasible},
                       {"duration", oracle.duration * s.time},
                       {"effective_switches", oracle.effective_switches},
                       {"endpoint_miss", oracle.endpoint_miss * s.length},
                       {"evaluated", oracle.evaluated},
                       {"allowance", allowance * s.time},
                       {"consistent", oracle_ok}};
  doc["pass"] = pass;
  doc["units"] = units_json(c, s);
  write_json(c.outdir / "certify.json", doc);

  std::cout << "certificate: " << (cert.pass ? "pass" : "FAIL")
            << "  (max |H| = " << format_value(cert.max_abs_H) << ")\n"
            << "oracle:      " << (oracle_ok ? "consistent" : "INCONSISTENT")
            << "  (best T = " << format_value(oracle.duration * s.time)
            << ", closed form = " << format_value(scaled.total) << ")\n";
  return pass ? kExitOk : kExitInfeasible;
}

}  // namespace qpiston::cli
