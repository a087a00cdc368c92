// Acceptance gate: end-to-end checks of the full toolkit, one line per
// criterion. Exits nonzero if any criterion fails.

#include "qpiston/dynamics.hpp"
#include "qpiston/inverse.hpp"
#include "qpiston/optimal.hpp"
#include "qpiston/quantum.hpp"
#include "qpiston/thermo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

using namespace qpiston;

namespace {

int g_failures = 0;

void report(int idx, bool ok, const std::string& label, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", idx, label.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

// 50 log-spaced expansion factors in (1, 1e4], shared by criteria 3 and 9.
std::vector<double> gamma_ladder() {
  std::vector<double> g(50);
  for (int i = 0; i < 50; ++i) g[i] = std::pow(10.0, 4.0 * (i + 1) / 50.0);
  return g;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  // 1. Closed-form minimum expansion time for a tenfold expansion.
  {
    const double total = solve_optimal(10.0).total;
    report(1, std::abs(total - 3.4295) <= 1e-4,
           "one-switch minimum time at gamma = 10",
           fmt("T = %.12g, |T - 3.4295| = %.2e (tol 1e-4)", total,
               std::abs(total - 3.4295)));
  }

  // 2. Smooth inverse-engineered baseline: minimum feasible duration and the
  //    unit bound attained on the negative side of the stiffness profile.
  {
    const double tmin = min_feasible_duration(10.0);
    double umin = 0.0;
    for (int k = 0; k <= 20000; ++k)
      umin = std::min(umin, poly_control(10.0, tmin, k / 20000.0));
    const bool ok_t = std::abs(tmin - 6.2511) <= 1e-3;
    const bool ok_u = umin >= -1.0 - 1e-6 && umin <= -1.0 + 1e-3;
    report(2, ok_t && ok_u, "smooth baseline at gamma = 10",
           fmt("T_min = %.12g (tol 1e-3 about 6.2511), min u = %.9f", tmin, umin));
  }

  // 3. The bang-bang schedule lands on (gamma, 0) across four decades.
  {
    double worst = 0.0, at = 0.0;
    for (const double gamma : gamma_ladder()) {
      const OptimalSolution sol = solve_optimal(gamma);
      ControlSchedule schedule;
      schedule.append(sol.t_x, -1.0);
      schedule.append(sol.t_y, +1.0);
      const Trajectory traj = propagate_schedule(State(1.0, 0.0), schedule);
      const double miss =
          traj.breached ? 1.0
                        : std::max(std::abs(traj.final_state()(0) - gamma),
                                   std::abs(traj.final_state()(1)));
      if (miss > worst) {
        worst = miss;
        at = gamma;
      }
    }
    report(3, worst <= 1e-9, "endpoint accuracy over 50 factors in (1, 1e4]",
           fmt("worst miss = %.2e at gamma = %.6g (tol 1e-9)", worst, at));
  }

  // 4. Exhaustive multi-switch search never beats the one-switch solution and
  //    collapses back onto it.
  {
    bool all_ok = true;
    std::string detail;
    for (const double gamma : {1.5, 2.0, 5.0, 10.0}) {
      const auto t0 = std::chrono::steady_clock::now();
      BruteForceOptions opts;  // grid 1e-3, up to 3 switches
      const BruteForceResult res = brute_force_min_time(gamma, opts);
      const double elapsed = seconds_since(t0);
      const double closed = solve_optimal(gamma).total;
      const bool ok = res.feasible &&
                      res.duration >= closed - (opts.grid_step + opts.endpoint_tol) &&
                      res.duration <= closed + 1e-2 && res.effective_switches == 1 &&
                      elapsed < 60.0;
      all_ok = all_ok && ok;
      detail += fmt("g=%.3g: dT=%+.1e sw=%.0f ", gamma, res.duration - closed,
                    static_cast<double>(res.effective_switches));
      detail += fmt("(%.2fs) ", elapsed);
    }
    report(4, all_ok, "search oracle confirms one switch for 4 factors", detail);
  }

  // 5. Maximum-principle certificates for the closed-form plans.
  {
    bool all_ok = true;
    std::string detail;
    for (const double gamma : {2.0, 10.0}) {
      const OptimalSolution sol = solve_optimal(gamma);
      const PMPCertificate cert = build_certificate(sol);
      const bool one_zero = cert.phi_zero_times.size() == 1;
      const double zero_err =
          one_zero ? std::abs(cert.phi_zero_times[0] - sol.t_x) : 1.0;
      const bool ok =
          cert.pass && cert.max_abs_H <= 1e-6 && one_zero && zero_err <= 1e-6;
      all_ok = all_ok && ok;
      detail += fmt("g=%.3g: max|H|=%.1e zero_err=%.1e ", gamma, cert.max_abs_H,
                    zero_err);
    }
    report(5, all_ok, "adjoint certificates validate the plans", detail);
  }

  // 6. Logarithmic asymptote of the minimum time.
  {
    const double total = solve_optimal(1e4).total;
    const double limit = std::log(std::sqrt(2.0)) + std::numbers::pi / 4.0;
    const double err = std::abs(total - std::log(1e4) - limit);
    report(6, err <= 1e-3, "large-factor asymptote T - ln(gamma) -> ln(sqrt 2) + pi/4",
           fmt("T(1e4) = %.10g, deviation from the limit = %.2e (tol 1e-3)", total,
               err));
  }

  // 7. Scaled-frame quantum evolution under the slaved stiffness transfers
  //    eigenstates and superpositions without heating.
  {
    const auto t0 = std::chrono::steady_clock::now();
    const ExpansionPlan plan = optimal_expansion_plan(4.0);
    const SchrodingerProblem problem = slaved_problem(plan);
    const int grid = 512;
    EvolveOptions opts;  // dt = 1e-4

    const ModeExpansion ground = equal_superposition({1});
    const WaveFunction psi0 =
        exact_state(ground, 1.0, 0.0, Eigen::VectorXd::Zero(1), grid);
    EvolveStats stats;
    const WaveFunction ev1 = evolve_pde(psi0, problem, plan.duration, opts, &stats);
    const WaveFunction target1 =
        exact_state(ground, plan.wall(plan.duration), plan.wall_rate(plan.duration),
                    mode_phase_integrals(plan, 1, plan.duration), grid);
    const double f1 = fidelity(ev1, target1);
    const double ratio = mean_energy(ev1) / mean_energy(psi0);

    const ModeExpansion pair = equal_superposition({1, 2});
    const WaveFunction psi2 =
        exact_state(pair, 1.0, 0.0, Eigen::VectorXd::Zero(2), grid);
    const WaveFunction ev2 = evolve_pde(psi2, problem, plan.duration, opts);
    const Eigen::VectorXd pops = mode_populations(ev2, 2);
    const double elapsed = seconds_since(t0);

    const bool ok = f1 >= 0.9999 && std::abs(pops(0) - 0.5) <= 1e-4 &&
                    std::abs(pops(1) - 0.5) <= 1e-4 &&
                    std::abs(ratio - 1.0 / 16.0) <= 1e-4 && stats.resolution_ok &&
                    elapsed < 120.0;
    report(7, ok, "slaved evolution at gamma = 4 on a 512-point grid",
           fmt("F = %.12f, populations (%.6f, %.6f), ", f1, pops(0), pops(1)) +
               fmt("E_T/E_0 = %.10f (target 0.0625), %.1fs", ratio, elapsed));
  }

  // 8. Cooling-rate optimum stays below the vanishing-temperature bound and
  //    the normalized rate R*/tau_c falls as tau_c -> 0.
  {
    bool all_ok = true;
    double prev_ratio = std::numeric_limits<double>::infinity();
    std::string detail;
    for (const double tau_c : {1e-2, 1e-3, 1e-4}) {
      const MaxRateResult r = max_cooling_rate(tau_c, 1.0);
      const double ratio = r.rate_star / tau_c;
      const bool ok = r.rate_star > 0.0 && r.rate_star < r.bound && ratio < prev_ratio;
      all_ok = all_ok && ok;
      prev_ratio = ratio;
      detail += fmt("tau=%.0e: R*=%.3e < %.3e ", tau_c, r.rate_star, r.bound);
    }
    report(8, all_ok, "cooling rate respects the low-temperature bound", detail);
  }

  // 9. The bang-bang schedule beats the smooth baseline everywhere.
  {
    double worst_margin = std::numeric_limits<double>::infinity();
    double at = 0.0;
    bool all_ok = true;
    for (const double gamma : gamma_ladder()) {
      const double t_opt = solve_optimal(gamma).total;
      const double t_inv = min_feasible_duration(gamma);
      if (!(t_opt < t_inv)) all_ok = false;
      const double margin = t_inv - t_opt;
      if (margin < worst_margin) {
        worst_margin = margin;
        at = gamma;
      }
    }
    report(9, all_ok, "strict dominance over the smooth baseline at all 50 factors",
           fmt("smallest margin T_inv - T_opt = %.6g at gamma = %.6g", worst_margin,
               at));
  }

  std::printf("acceptance: %d/9 criteria passed\n", 9 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
