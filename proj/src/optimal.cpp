#include "qpiston/optimal.hpp"

#include "qpiston/dynamics.hpp"
#include "qpiston/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qpiston {

OptimalSolution solve_optimal(double gamma) {
  if (!(gamma > 1.0))
    throw std::invalid_argument("solve_optimal: require gamma > 1 (expansion)");
  const double r = std::sqrt((gamma * gamma - 1.0) / 2.0);
  OptimalSolution sol;
  sol.gamma = gamma;
  sol.t_x = std::asinh(r);
  sol.t_y = std::asin(r / gamma);
  sol.total = sol.t_x + sol.t_y;
  sol.switch_state = State(std::sqrt((gamma * gamma + 1.0) / 2.0), r);
  return sol;
}

ExpansionPlan optimal_expansion_plan(const OptimalSolution& sol) {
  ExpansionPlan plan;
  plan.gamma = sol.gamma;
  plan.duration = sol.total;
  plan.method = PlanMethod::Optimal;
  plan.schedule.append(sol.t_x, -1.0);
  plan.schedule.append(sol.t_y, +1.0);
  plan.switch_states = {sol.switch_state};

  const double t_x = sol.t_x;
  const double total = sol.total;
  const State z = sol.switch_state;
  plan.control = [t_x, total](double t) {
    if (t < 0.0 || t > total) return 0.0;
    return t < t_x ? -1.0 : +1.0;
  };
  plan.state = [t_x, total, z](double t) {
    const double tc = std::clamp(t, 0.0, total);
    if (tc <= t_x) return propagate_constant(State(1.0, 0.0), -1.0, tc);
    return propagate_constant(z, +1.0, tc - t_x);
  };
  return plan;
}

ExpansionPlan optimal_expansion_plan(double gamma) {
  return optimal_expansion_plan(solve_optimal(gamma));
}

ExpansionPlan ramped_plan(const OptimalSolution& sol, double delta, double dt_step) {
  if (!(delta > 0.0)) throw std::invalid_argument("ramped_plan: require delta > 0");
  if (1.5 * delta > sol.t_x || 1.5 * delta > sol.t_y)
    throw std::invalid_argument("ramped_plan: ramps overlap; reduce delta");

  const double t_x = sol.t_x;
  const double total = sol.total;
  auto control = [delta, t_x, total](double t) {
    if (t <= 0.0 || t >= total) return 0.0;
    if (t < delta) return -t / delta;
    if (t < t_x - 0.5 * delta) return -1.0;
    if (t < t_x + 0.5 * delta) return -1.0 + 2.0 * (t - (t_x - 0.5 * delta)) / delta;
    if (t < total - delta) return +1.0;
    return 1.0 - (t - (total - delta)) / delta;
  };

  auto traj = std::make_shared<InterpolatedTrajectory>(
      integrate_dense(State(1.0, 0.0), control, total, dt_step));

  ExpansionPlan plan;
  plan.gamma = sol.gamma;
  plan.duration = total;
  plan.method = PlanMethod::Custom;
  plan.control = control;
  plan.state = [traj](double t) { return traj->eval(t); };
  return plan;
}

// ---------------------------------------------------------------------------
// Pontryagin certificate
// ---------------------------------------------------------------------------

namespace {

using Costate = Eigen::Vector2d;

// Adjoint right-hand side: l1' = u l2, l2' = -l1.
Costate adjoint_rhs(const Costate& l, double u) { return Costate(u * l(1), -l(0)); }

Costate adjoint_rk4(const Costate& l, double u, double h) {
  const Costate k1 = adjoint_rhs(l, u);
  const Costate k2 = adjoint_rhs(l + 0.5 * h * k1, u);
  const Costate k3 = adjoint_rhs(l + 0.5 * h * k2, u);
  const Costate k4 = adjoint_rhs(l + h * k3, u);
  return l + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Arc {
  double t0 = 0.0;
  double t1 = 0.0;
  double u = 0.0;
  State x0 = State(1.0, 0.0);  // state at t0
};

}  // namespace

PMPCertificate build_certificate(const ExpansionPlan& plan, double adjoint_dt,
                                 double h_tol, double switch_tol) {
  if (plan.schedule.empty())
    throw std::invalid_argument("build_certificate: plan has no bang-bang schedule");
  if (!(adjoint_dt > 0.0))
    throw std::invalid_argument("build_certificate: require adjoint_dt > 0");

  PMPCertificate cert;
  const double gamma = plan.gamma;

  // Forward pass: arc boundaries and exact states.
  std::vector<Arc> arcs;
  {
    double t = 0.0;
    State x(1.0, 0.0);
    for (const auto& seg : plan.schedule.segments()) {
      if (seg.duration <= 0.0) continue;
      arcs.push_back({t, t + seg.duration, seg.value, x});
      x = propagate_constant(x, seg.value, seg.duration);
      t += seg.duration;
    }
  }
  if (arcs.empty())
    throw std::invalid_argument("build_certificate: schedule has zero duration");
  const double T = arcs.back().t1;

  // Interior switch times of the schedule under scrutiny.
  std::vector<double> switch_times;
  for (std::size_t i = 0; i + 1 < arcs.size(); ++i)
    if (arcs[i].u != arcs[i + 1].u) switch_times.push_back(arcs[i].t1);

  // Backward pass: two costate basis solutions A (l(T) = (1,0)) and
  // B (l(T) = (0,1)) integrated backward arc by arc. Node arrays come out in
  // reverse time order and are flipped afterwards.
  std::vector<double> node_t;
  std::vector<Costate> node_A, node_B;
  std::vector<double> node_u;
  std::vector<int> node_arc;
  Costate A(1.0, 0.0), B(0.0, 1.0);
  for (int i = static_cast<int>(arcs.size()) - 1; i >= 0; --i) {
    const Arc& arc = arcs[i];
    const double len = arc.t1 - arc.t0;
    const long n = std::max(1L, std::lround(std::ceil(len / adjoint_dt - 1e-9)));
    const double h = len / static_cast<double>(n);
    if (i == static_cast<int>(arcs.size()) - 1) {
      node_t.push_back(arc.t1);
      node_A.push_back(A);
      node_B.push_back(B);
      node_u.push_back(arc.u);
      node_arc.push_back(i);
    }
    for (long k = 1; k <= n; ++k) {
      A = adjoint_rk4(A, arc.u, -h);
      B = adjoint_rk4(B, arc.u, -h);
      node_t.push_back(arc.t1 - k * h);
      node_A.push_back(A);
      node_B.push_back(B);
      node_u.push_back(arc.u);
      node_arc.push_back(i);
    }
  }
  std::reverse(node_t.begin(), node_t.end());
  std::reverse(node_A.begin(), node_A.end());
  std::reverse(node_B.begin(), node_B.end());
  std::reverse(node_u.begin(), node_u.end());
  std::reverse(node_arc.begin(), node_arc.end());
  const std::size_t n_nodes = node_t.size();

  // Terminal costate from the declared target: H(T) = 0 at x(T) = (gamma, 0)
  // with the expansion synthesis' terminal bang u = +1 forces
  // lambda2(T) = -1/gamma. The free component lambda1(T) = alpha is pinned by
  // a vanishing switching function at the schedule's last switch.
  const double l2_T = -1.0 / gamma;
  double alpha = 0.0;
  if (!switch_times.empty()) {
    const double t_s = switch_times.back();
    std::size_t idx = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_nodes; ++i) {
      const double d = std::abs(node_t[i] - t_s);
      if (d < best) {
        best = d;
        idx = i;
      }
    }
    const double a2 = node_A[idx](1);
    const double b2 = node_B[idx](1);
    if (std::abs(a2) > 1e-12) {
      alpha = -l2_T * b2 / a2;
    } else {
      cert.violations.push_back(
          "degenerate switch: cannot pin the terminal costate");
    }
  }

  // Assemble lambda, phi = -lambda2, and H = -1 + l1 x2 - l2 x1 u per node.
  std::vector<double> phi(n_nodes), ham(n_nodes);
  std::vector<Costate> lam(n_nodes);
  double max_abs_H = 0.0;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const Arc& arc = arcs[node_arc[i]];
    const State x = propagate_constant(arc.x0, arc.u, node_t[i] - arc.t0);
    lam[i] = alpha * node_A[i] + l2_T * node_B[i];
    phi[i] = -lam[i](1);
    ham[i] = -1.0 + lam[i](0) * x(1) - lam[i](1) * x(0) * node_u[i];
    max_abs_H = std::max(max_abs_H, std::abs(ham[i]));
  }
  cert.max_abs_H = max_abs_H;
  if (max_abs_H > h_tol) {
    std::ostringstream os;
    os << "max |H| = " << max_abs_H << " exceeds tolerance " << h_tol;
    cert.violations.push_back(os.str());
  }

  // Switching-function zeros: sign changes plus isolated exact zeros,
  // deduplicated within a short window.
  const double zero_window = 50.0 * adjoint_dt;
  const double phi_scale = [&] {
    double m = 0.0;
    for (double p : phi) m = std::max(m, std::abs(p));
    return m > 0.0 ? m : 1.0;
  }();
  for (std::size_t i = 0; i + 1 < n_nodes; ++i) {
    double z = std::numeric_limits<double>::quiet_NaN();
    if (phi[i] == 0.0 ||
        (std::abs(phi[i]) < 1e-13 * phi_scale && std::abs(phi[i]) <= std::abs(phi[i + 1]))) {
      z = node_t[i];
    } else if (phi[i] * phi[i + 1] < 0.0) {
      z = node_t[i] +
          (node_t[i + 1] - node_t[i]) * phi[i] / (phi[i] - phi[i + 1]);
    }
    if (std::isnan(z)) continue;
    if (!cert.phi_zero_times.empty() && z - cert.phi_zero_times.back() < zero_window)
      continue;
    cert.phi_zero_times.push_back(z);
  }

  if (cert.phi_zero_times.size() != switch_times.size()) {
    std::ostringstream os;
    os << "switching-function zero count " << cert.phi_zero_times.size()
       << " does not match switch count " << switch_times.size();
    cert.violations.push_back(os.str());
  } else {
    for (std::size_t i = 0; i < switch_times.size(); ++i) {
      if (std::abs(cert.phi_zero_times[i] - switch_times[i]) > switch_tol) {
        std::ostringstream os;
        os << "switching-function zero at t = " << cert.phi_zero_times[i]
           << " misses the switch at t = " << switch_times[i];
        cert.violations.push_back(os.str());
      }
    }
  }

  // Maximum condition: away from the zeros the control must have the sign of
  // the switching function. One message per offending arc.
  std::vector<bool> arc_flagged(arcs.size(), false);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (node_u[i] * phi[i] >= 0.0) continue;
    double dist = std::numeric_limits<double>::infinity();
    for (double z : cert.phi_zero_times) dist = std::min(dist, std::abs(node_t[i] - z));
    if (dist <= zero_window) continue;
    const int a = node_arc[i];
    if (arc_flagged[a]) continue;
    arc_flagged[a] = true;
    std::ostringstream os;
    os << "control opposes the switching function on arc " << (a + 1) << " (u = "
       << node_u[i] << ", t in [" << arcs[a].t0 << ", " << arcs[a].t1 << "])";
    cert.violations.push_back(os.str());
  }

  // Strided sample record (endpoints and switch nodes always kept).
  const std::size_t stride = std::max<std::size_t>(1, n_nodes / 2048);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    bool keep = (i % stride == 0) || i + 1 == n_nodes;
    if (!keep && i > 0 && node_arc[i] != node_arc[i - 1]) keep = true;
    if (keep)
      cert.samples.push_back({node_t[i], lam[i](0), lam[i](1), phi[i], ham[i]});
  }

  cert.pass = cert.violations.empty();
  return cert;
}

PMPCertificate build_certificate(const OptimalSolution& sol, double adjoint_dt) {
  return build_certificate(optimal_expansion_plan(sol), adjoint_dt);
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

namespace {

constexpr double kPi = std::numbers::pi;

struct Candidate {
  bool valid = false;
  double total = std::numeric_limits<double>::infinity();
  std::vector<double> durations;  // one per arc, signs implied by the pattern
  std::vector<double> signs;
};

// Deterministic total order: duration, then arc count, then lexicographic.
bool better(const Candidate& a, const Candidate& b) {
  if (!a.valid) return false;
  if (!b.valid) return true;
  if (a.total != b.total) return a.total < b.total;
  if (a.durations.size() != b.durations.size())
    return a.durations.size() < b.durations.size();
  for (std::size_t i = 0; i < a.durations.size(); ++i)
    if (a.durations[i] != b.durations[i]) return a.durations[i] < b.durations[i];
  return false;
}

// Completion of the last two arcs (u = -1 then u = +1): stretch along the
// hyperbolic arc from z until the circle x1^2 + x2^2 = gamma^2 is hit, then
// rotate clockwise into (gamma, 0). Returns the two durations or nothing.
std::optional<std::pair<double, double>> complete_xy(const State& z, double gamma) {
  const double g2 = gamma * gamma;
  const double a = z(0) * z(0) + z(1) * z(1);
  const double b = 2.0 * z(0) * z(1);
  const double c = z(0) * z(0) - z(1) * z(1);  // conserved by the u = -1 arc

  std::vector<double> hits;  // candidate hyperbolic-arc durations
  if (std::abs(c) > 1e-14 * a) {
    const double ratio = g2 / std::abs(c);
    if (ratio >= 1.0) {
      const double amp = std::acosh(ratio);
      const double psi = std::atanh(b / a);
      for (const double root : {(amp - psi) / 2.0, (-amp - psi) / 2.0})
        if (root >= -1e-15) hits.push_back(std::max(0.0, root));
    }
  } else {
    // Degenerate separatrix x2 = +-x1: r^2(t) = a exp(+-2t).
    const double s = (z(1) >= 0.0) ? 1.0 : -1.0;
    const double root = s * 0.5 * std::log(g2 / a);
    if (root >= -1e-15) hits.push_back(std::max(0.0, root));
  }

  std::optional<std::pair<double, double>> best;
  for (const double t_h : hits) {
    if (first_breach_time(z, -1.0, t_h)) continue;
    const State w = propagate_constant(z, -1.0, t_h);
    if (!(w(0) > 0.0)) continue;
    const double theta = std::atan2(w(1), w(0));
    if (theta < -1e-12 || theta >= kPi / 2.0) continue;  // clockwise leg leaves x1 > 0
    const double t_c = std::max(0.0, theta);
    if (!best || t_h + t_c < best->first + best->second) best = {{t_h, t_c}};
  }
  return best;
}

// Completion of the last two arcs (u = +1 then u = -1): rotate clockwise from
// z to the hyperbola x1^2 - x2^2 = gamma^2 (lower branch point), then ride it
// up into (gamma, 0).
std::optional<std::pair<double, double>> complete_yx(const State& z, double gamma) {
  const double g2 = gamma * gamma;
  const double r2 = z(0) * z(0) + z(1) * z(1);  // conserved by the u = +1 arc
  if (r2 < g2 * (1.0 - 1e-14)) return std::nullopt;
  const double q1 = std::sqrt((r2 + g2) / 2.0);
  const double q2 = -std::sqrt(std::max(0.0, (r2 - g2) / 2.0));
  const double theta_z = std::atan2(z(1), z(0));
  const double theta_q = std::atan2(q2, q1);
  if (theta_z < theta_q - 1e-12) return std::nullopt;  // would sweep through x1 <= 0
  const double t_c = std::max(0.0, theta_z - theta_q);
  const double t_h = std::asinh(-q2 / gamma);
  return {{t_c, t_h}};
}

std::optional<std::pair<double, double>> complete_last_two(const State& z, double gamma,
                                                           double penult_sign) {
  return penult_sign < 0.0 ? complete_xy(z, gamma) : complete_yx(z, gamma);
}

// Exact endpoint of an alternating bang sequence; nullopt when the wall
// collapses on the way.
std::optional<State> propagate_arcs(const std::vector<double>& signs,
                                    const std::vector<double>& durations) {
  State x(1.0, 0.0);
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (durations[i] <= 0.0) continue;
    if (first_breach_time(x, signs[i], durations[i])) return std::nullopt;
    x = propagate_constant(x, signs[i], durations[i]);
  }
  return x;
}

double endpoint_miss(const State& x, double gamma) {
  return std::max(std::abs(x(0) - gamma), std::abs(x(1)));
}

// One- and two-free-arc scans for a fixed sign pattern. `pattern` holds the
// signs of every arc; the first pattern.size() - 2 durations run over the
// grid and the final two come from the conic completion.
void scan_pattern(double gamma, const std::vector<double>& pattern, double grid_step,
                  double prune_total, Candidate& best, std::uint64_t& evaluated) {
  const std::size_t m = pattern.size();
  const std::size_t free_arcs = m - 2;

  const auto try_candidate = [&](const std::vector<double>& free_durations,
                                 double partial, const State& z) {
    ++evaluated;
    const auto tail = complete_last_two(z, gamma, pattern[m - 2]);
    if (!tail) return;
    const double total = partial + tail->first + tail->second;
    Candidate cand;
    cand.valid = true;
    cand.total = total;
    cand.signs = pattern;
    cand.durations = free_durations;
    cand.durations.push_back(tail->first);
    cand.durations.push_back(tail->second);
    if (better(cand, best)) best = cand;
  };

  if (free_arcs == 0) {
    try_candidate({}, 0.0, State(1.0, 0.0));
    return;
  }

  if (free_arcs == 1) {
    for (long k = 0;; ++k) {
      const double t1 = k * grid_step;
      const double bound = std::min(prune_total, best.total);
      if (t1 >= bound) break;
      // A breach time is fixed along the arc, so every longer arc breaches too.
      if (first_breach_time(State(1.0, 0.0), pattern[0], t1)) break;
      try_candidate({t1}, t1, propagate_constant(State(1.0, 0.0), pattern[0], t1));
    }
    return;
  }

  // Two free arcs.
  for (long k1 = 0;; ++k1) {
    const double t1 = k1 * grid_step;
    if (t1 >= std::min(prune_total, best.total)) break;
    if (first_breach_time(State(1.0, 0.0), pattern[0], t1)) break;
    const State x1 = propagate_constant(State(1.0, 0.0), pattern[0], t1);
    for (long k2 = 0;; ++k2) {
      const double t2 = k2 * grid_step;
      const double bound = std::min(prune_total, best.total);
      if (t1 + t2 >= bound) break;
      if (first_breach_time(x1, pattern[1], t2)) break;
      try_candidate({t1, t2}, t1 + t2, propagate_constant(x1, pattern[1], t2));
    }
  }
}

}  // namespace

BruteForceResult brute_force_min_time(double gamma, const BruteForceOptions& opts) {
  if (!(gamma > 1.0))
    throw std::invalid_argument("brute_force_min_time: require gamma > 1");
  if (opts.max_switches < 0 || opts.max_switches > 3)
    throw std::invalid_argument("brute_force_min_time: max_switches must be in [0, 3]");
  if (!(opts.grid_step > 0.0))
    throw std::invalid_argument("brute_force_min_time: require grid_step > 0");
  if (!opts.allow_negative && !opts.allow_positive)
    throw std::invalid_argument("brute_force_min_time: empty control set");

  BruteForceResult result;
  std::uint64_t evaluated = 0;
  Candidate best;

  // Single-arc structures are infeasible outright: each bang conserves
  // s x1^2 + x2^2, and gamma^2 != 1 puts the target off the conic of (1, 0).
  // They still count as probed structures.
  if (opts.allow_negative) ++evaluated;
  if (opts.allow_positive) ++evaluated;

  // Alternating multi-arc patterns, shortest first so the two-arc solution
  // seeds the pruning bound for the longer scans.
  std::vector<std::vector<double>> patterns;
  if (opts.allow_negative && opts.allow_positive) {
    for (int arcs = 2; arcs <= opts.max_switches + 1; ++arcs) {
      for (const double s0 : {-1.0, +1.0}) {
        std::vector<double> pattern(arcs);
        for (int i = 0; i < arcs; ++i) pattern[i] = (i % 2 == 0) ? s0 : -s0;
        patterns.push_back(std::move(pattern));
      }
    }
  }

  const double prune_cap = 2.0 * std::asinh(gamma) + kPi;  // generous horizon cap
  std::vector<std::vector<double>> heavy;  // two-free-arc patterns, run threaded
  for (const auto& pattern : patterns) {
    if (pattern.size() >= 4) {
      heavy.push_back(pattern);
      continue;
    }
    scan_pattern(gamma, pattern, opts.grid_step, prune_cap, best, evaluated);
  }

  if (!heavy.empty()) {
    const unsigned hw = std::thread::hardware_concurrency();
    const int n_threads =
        opts.threads > 0 ? opts.threads : static_cast<int>(hw > 0 ? hw : 1);
    const double seed_total = best.valid ? best.total : prune_cap;

    for (const auto& pattern : heavy) {
      // Partition the outer grid index across workers; each keeps a local
      // best (seeded by the two-arc bound, copied before launch so no task
      // reads shared state) and the results are min-reduced deterministically.
      const Candidate seed = best;
      const long k_max = std::lround(std::ceil(seed_total / opts.grid_step));
      const long chunk = std::max(1L, (k_max + n_threads - 1) / n_threads);
      std::vector<std::future<std::pair<Candidate, std::uint64_t>>> tasks;
      for (int w = 0; w < n_threads; ++w) {
        const long k_lo = w * chunk;
        const long k_hi = std::min(k_max, k_lo + chunk);
        if (k_lo >= k_hi) break;
        tasks.push_back(std::async(std::launch::async, [&gamma, &pattern, &opts, seed,
                                                        k_lo, k_hi] {
          Candidate local = seed;
          std::uint64_t local_eval = 0;
          for (long k1 = k_lo; k1 < k_hi; ++k1) {
            const double t1 = k1 * opts.grid_step;
            if (t1 >= local.total) break;
            if (first_breach_time(State(1.0, 0.0), pattern[0], t1)) break;
            const State x1 = propagate_constant(State(1.0, 0.0), pattern[0], t1);
            for (long k2 = 0;; ++k2) {
              const double t2 = k2 * opts.grid_step;
              if (t1 + t2 >= local.total) break;
              if (first_breach_time(x1, pattern[1], t2)) break;
              const State z = propagate_constant(x1, pattern[1], t2);
              ++local_eval;
              const auto tail = complete_last_two(z, gamma, pattern[2]);
              if (!tail) continue;
              Candidate cand;
              cand.valid = true;
              cand.total = t1 + t2 + tail->first + tail->second;
              cand.signs = pattern;
              cand.durations = {t1, t2, tail->first, tail->second};
              if (better(cand, local)) local = cand;
            }
          }
          return std::make_pair(local, local_eval);
        }));
      }
      for (auto& task : tasks) {
        auto [local, local_eval] = task.get();
        evaluated += local_eval;
        if (better(local, best)) best = local;
      }
    }
  }

  // Nelder-Mead polish of the raw durations: minimizes the total duration
  // with a penalty once the endpoint miss exceeds half the accepted slack.
  if (best.valid && opts.refine) {
    const std::vector<double> signs = best.signs;
    const double slack = 0.5 * opts.endpoint_tol;
    auto objective = [&](const Eigen::VectorXd& d) {
      std::vector<double> durations(signs.size());
      double total = 0.0;
      for (int i = 0; i < d.size(); ++i) {
        durations[i] = std::max(0.0, d(i));
        total += durations[i];
      }
      const auto end = propagate_arcs(signs, durations);
      if (!end) return 1e9;
      const double miss = endpoint_miss(*end, gamma);
      return total + 1e4 * std::max(0.0, miss - slack);
    };
    Eigen::VectorXd d0(static_cast<int>(best.durations.size()));
    for (int i = 0; i < d0.size(); ++i) d0(i) = best.durations[i];
    NelderMeadOptions nm;
    nm.initial_step = opts.grid_step;
    nm.max_iters = 600;
    const auto polished = nelder_mead_min(objective, d0, nm);

    std::vector<double> durations(signs.size());
    double total = 0.0;
    for (int i = 0; i < polished.x.size(); ++i) {
      durations[i] = std::max(0.0, polished.x(i));
      total += durations[i];
    }
    const auto end = propagate_arcs(signs, durations);
    if (end && endpoint_miss(*end, gamma) <= opts.endpoint_tol && total < best.total) {
      best.durations = durations;
      best.total = total;
    }
  }

  result.evaluated = evaluated;
  if (!best.valid) return result;

  result.feasible = true;
  result.duration = best.total;
  const auto end = propagate_arcs(best.signs, best.durations);
  result.endpoint_miss = end ? endpoint_miss(*end, gamma)
                             : std::numeric_limits<double>::infinity();

  double prev_sign = 0.0;
  for (std::size_t i = 0; i < best.durations.size(); ++i) {
    if (best.durations[i] <= 0.0) continue;
    result.schedule.append(best.durations[i], best.signs[i]);
    if (best.durations[i] > 0.5 * opts.grid_step) {
      if (prev_sign != 0.0 && best.signs[i] != prev_sign) ++result.effective_switches;
      prev_sign = best.signs[i];
    }
  }
  return result;
}

}  // namespace qpiston
