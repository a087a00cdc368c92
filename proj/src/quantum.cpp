#include "qpiston/quantum.hpp"

#include "qpiston/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpiston {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

}  // namespace

ModeExpansion::ModeExpansion(Eigen::VectorXcd coeffs) : c(std::move(coeffs)) {
  if (c.size() == 0) throw std::invalid_argument("ModeExpansion: no coefficients");
  if (std::abs(c.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("ModeExpansion: coefficients must have unit norm");
}

ModeExpansion equal_superposition(const std::vector<int>& modes) {
  if (modes.empty()) throw std::invalid_argument("equal_superposition: no modes");
  int n_max = 0;
  for (int n : modes) {
    if (n < 1) throw std::invalid_argument("equal_superposition: modes start at 1");
    n_max = std::max(n_max, n);
  }
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_max);
  const double amp = 1.0 / std::sqrt(static_cast<double>(modes.size()));
  for (int n : modes) {
    if (c(n - 1) != Complex(0.0, 0.0))
      throw std::invalid_argument("equal_superposition: duplicate mode");
    c(n - 1) = amp;
  }
  return ModeExpansion(std::move(c));
}

double WaveFunction::norm() const {
  // The scaling transformation is unitary, so the lab norm equals the
  // scaled-frame norm; trapezoid with implicit zero boundary values.
  return std::sqrt(values.squaredNorm() * grid_step());
}

WaveFunction eigenstate(int n, double a, int grid_size) {
  if (n < 1) throw std::invalid_argument("eigenstate: require n >= 1");
  if (!(a > 0.0)) throw std::invalid_argument("eigenstate: require width > 0");
  if (grid_size < 2) throw std::invalid_argument("eigenstate: grid too small");
  WaveFunction psi;
  psi.width = a;
  psi.values.resize(grid_size);
  const double h = 1.0 / (grid_size + 1);
  for (int j = 0; j < grid_size; ++j)
    psi.values(j) = std::sqrt(2.0) * std::sin(n * kPi * (j + 1) * h);
  return psi;
}

double eigen_energy(int n, double a) { return n * n * kPi * kPi / (2.0 * a * a); }

WaveFunction from_lab_function(const std::function<Complex(double)>& psi, double width,
                               int grid_size) {
  if (!(width > 0.0)) throw std::invalid_argument("from_lab_function: require width > 0");
  WaveFunction out;
  out.width = width;
  out.values.resize(grid_size);
  const double h = 1.0 / (grid_size + 1);
  for (int j = 0; j < grid_size; ++j)
    out.values(j) = std::sqrt(width) * psi(width * (j + 1) * h);
  return out;
}

WaveFunction exact_state(const ModeExpansion& modes, double wall, double wall_rate,
                         const Eigen::VectorXd& phase_integrals, int grid_size) {
  if (phase_integrals.size() < modes.c.size())
    throw std::invalid_argument("exact_state: missing phase integrals");
  WaveFunction psi;
  psi.width = wall;
  psi.width_rate = wall_rate;
  psi.values = Eigen::VectorXcd::Zero(grid_size);
  const double h = 1.0 / (grid_size + 1);
  for (int n = 1; n <= modes.max_mode(); ++n) {
    const Complex coeff = modes.c(n - 1) * std::exp(-kI * phase_integrals(n - 1));
    if (coeff == Complex(0.0, 0.0)) continue;
    for (int j = 0; j < grid_size; ++j)
      psi.values(j) += coeff * std::sqrt(2.0) * std::sin(n * kPi * (j + 1) * h);
  }
  return psi;
}

double rescaled_time(const ExpansionPlan& plan, double t, int quad_samples) {
  const double horizon = std::clamp(t, 0.0, plan.duration);
  if (horizon == 0.0) return 0.0;

  if (!plan.schedule.empty()) {
    // Exact segment-wise closed form along the bang-bang arcs.
    double s = 0.0;
    double t_base = 0.0;
    State x(1.0, 0.0);
    for (const auto& seg : plan.schedule.segments()) {
      if (seg.duration <= 0.0) continue;
      const double dt = std::min(seg.duration, horizon - t_base);
      if (dt > 0.0) s += inverse_square_time(x, seg.value, dt);
      if (t_base + seg.duration >= horizon) return s;
      x = propagate_constant(x, seg.value, seg.duration);
      t_base += seg.duration;
    }
    return s;
  }

  // Composite Simpson quadrature of 1/a(t')^2.
  int n = std::max(2, quad_samples);
  if (n % 2 != 0) ++n;
  const double h = horizon / n;
  auto f = [&plan](double tt) {
    const double a = plan.wall(tt);
    return 1.0 / (a * a);
  };
  double acc = f(0.0) + f(horizon);
  for (int k = 1; k < n; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * f(k * h);
  return acc * h / 3.0;
}

Eigen::VectorXd mode_phase_integrals(const ExpansionPlan& plan, int n_max, double t,
                                     int quad_samples) {
  if (n_max < 1) throw std::invalid_argument("mode_phase_integrals: require n_max >= 1");
  const double s = rescaled_time(plan, t, quad_samples);
  Eigen::VectorXd theta(n_max);
  for (int n = 1; n <= n_max; ++n) theta(n - 1) = n * n * kPi * kPi / 2.0 * s;
  return theta;
}

Complex overlap(const WaveFunction& a, const WaveFunction& b) {
  if (a.grid_size() != b.grid_size())
    throw std::invalid_argument("overlap: grid sizes differ");
  if (std::abs(a.width - b.width) > 1e-12 * std::max(1.0, a.width))
    throw std::invalid_argument("overlap: widths differ; use overlap_with_eigenstate");
  const int n = a.grid_size();
  const double h = 1.0 / (n + 1);
  const double dw = b.width_rate - a.width_rate;
  Complex acc(0.0, 0.0);
  for (int j = 0; j < n; ++j) {
    const double y = (j + 1) * h;
    const Complex phase =
        (dw == 0.0) ? Complex(1.0, 0.0) : std::exp(kI * (0.5 * dw * a.width * y * y));
    acc += std::conj(a.values(j)) * b.values(j) * phase;
  }
  return acc * h;
}

double fidelity(const WaveFunction& a, const WaveFunction& b) {
  return std::norm(overlap(a, b));
}

Complex overlap_with_eigenstate(const WaveFunction& psi, int n, double box_width) {
  if (n < 1) throw std::invalid_argument("overlap_with_eigenstate: require n >= 1");
  if (!(box_width > 0.0))
    throw std::invalid_argument("overlap_with_eigenstate: require box_width > 0");
  const int m = psi.grid_size();
  const double h = 1.0 / (m + 1);
  const double a = psi.width;
  const double amp = std::sqrt(2.0 / box_width) / std::sqrt(a);
  Complex acc(0.0, 0.0);
  for (int j = 0; j < m; ++j) {
    const double x = a * (j + 1) * h;
    if (x >= box_width) break;  // the target eigenstate vanishes beyond its box
    const Complex phase = (psi.width_rate == 0.0)
                              ? Complex(1.0, 0.0)
                              : std::exp(kI * (0.5 * psi.width_rate * x * x / a));
    acc += amp * std::sin(n * kPi * x / box_width) * phase * psi.values(j);
  }
  return acc * a * h;
}

double fidelity_vs_eigenstate(const WaveFunction& psi, int n, double box_width) {
  return std::norm(overlap_with_eigenstate(psi, n, box_width));
}

Eigen::VectorXd mode_populations(const WaveFunction& psi, int n_max) {
  if (n_max < 1) throw std::invalid_argument("mode_populations: require n_max >= 1");
  Eigen::VectorXd p(n_max);
  for (int n = 1; n <= n_max; ++n)
    p(n - 1) = std::norm(overlap_with_eigenstate(psi, n, psi.width));
  return p;
}

double mean_energy(const WaveFunction& psi, int n_max, double* captured) {
  const Eigen::VectorXd p = mode_populations(psi, n_max);
  double e = 0.0;
  for (int n = 1; n <= n_max; ++n) e += p(n - 1) * eigen_energy(n, psi.width);
  if (captured) *captured = p.sum();
  return e;
}

SchrodingerProblem slaved_problem(const ExpansionPlan& plan) {
  SchrodingerProblem prob;
  prob.wall = [plan](double t) { return plan.wall(t); };
  prob.wall_rate = [plan](double t) { return plan.wall_rate(t); };
  prob.wall_accel = [plan](double t) { return plan.wall_accel(t); };
  prob.stiffness = plan.control;
  return prob;
}

SchrodingerProblem perturbed_problem(const ExpansionPlan& plan, double eps) {
  SchrodingerProblem prob = slaved_problem(plan);
  const auto base = plan.control;
  prob.stiffness = [base, eps](double t) { return (1.0 + eps) * base(t); };
  return prob;
}

namespace {

// Sine content of the scaled-frame grid function (no quadratic phase):
// the largest significantly occupied mode index sets the frequency guard.
int effective_top_mode(const Eigen::VectorXcd& values, int cap) {
  const int m = static_cast<int>(values.size());
  const double h = 1.0 / (m + 1);
  int top = 1;
  for (int n = 1; n <= std::min(cap, m); ++n) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < m; ++j)
      acc += std::sqrt(2.0) * std::sin(n * kPi * (j + 1) * h) * values(j);
    if (std::norm(acc * h) >= 1e-8) top = n;
  }
  return top;
}

// In-place Thomas solve of (diag_j) x_j + off (x_{j-1} + x_{j+1}) = rhs_j.
void solve_tridiagonal(const Eigen::VectorXcd& diag, Complex off, Eigen::VectorXcd& rhs,
                       Eigen::VectorXcd& scratch) {
  const int m = static_cast<int>(diag.size());
  scratch(0) = off / diag(0);
  rhs(0) /= diag(0);
  for (int j = 1; j < m; ++j) {
    const Complex denom = diag(j) - off * scratch(j - 1);
    scratch(j) = off / denom;
    rhs(j) = (rhs(j) - off * rhs(j - 1)) / denom;
  }
  for (int j = m - 2; j >= 0; --j) rhs(j) -= scratch(j) * rhs(j + 1);
}

}  // namespace

WaveFunction evolve_pde(const WaveFunction& psi, const SchrodingerProblem& problem,
                        double t_final, const EvolveOptions& opts, EvolveStats* stats,
                        const std::function<void(const WaveFunction&)>& observer) {
  if (!(opts.dt > 0.0)) throw std::invalid_argument("evolve_pde: require dt > 0");
  if (t_final < psi.time) throw std::invalid_argument("evolve_pde: t_final < start time");
  {
    const double a0 = problem.wall(psi.time);
    if (!(a0 > 0.0)) throw std::domain_error("evolve_pde: wall not strictly positive");
    if (std::abs(psi.width - a0) > 1e-9 * std::max(1.0, a0))
      throw std::invalid_argument("evolve_pde: state width does not match the wall");
  }

  WaveFunction out = psi;
  EvolveStats local;
  const double norm0 = psi.norm();

  const double span = t_final - psi.time;
  const long n_steps =
      span > 0.0 ? std::max(1L, std::lround(std::ceil(span / opts.dt - 1e-9))) : 0L;
  const double dt = n_steps > 0 ? span / static_cast<double>(n_steps) : 0.0;

  const int m = out.grid_size();
  const double hy = 1.0 / (m + 1);
  const int top_mode = effective_top_mode(out.values, 64);

  Eigen::VectorXcd diag(m), scratch(m), rhs(m);
  for (long k = 0; k < n_steps; ++k) {
    const double t_mid = psi.time + (k + 0.5) * dt;
    const double a = problem.wall(t_mid);
    if (!(a > 0.0)) throw std::domain_error("evolve_pde: wall not strictly positive");
    const double w =
        0.5 * (a * a * problem.stiffness(t_mid) + a * problem.wall_accel(t_mid));

    // Frequency guard: highest tracked mode energy plus the residual
    // quadratic potential averaged over the box (<y^2> = 1/3).
    const double omega =
        top_mode * top_mode * kPi * kPi / (2.0 * a * a) + std::abs(w) / 3.0;
    local.max_dt_omega = std::max(local.max_dt_omega, dt * omega);

    const double inv_a2h2 = 1.0 / (a * a * hy * hy);
    const Complex beta = 0.5 * dt * kI;
    const Complex off_h(-0.5 * inv_a2h2, 0.0);
    const Complex off_a = beta * off_h;
    for (int j = 0; j < m; ++j) {
      const double y = (j + 1) * hy;
      const Complex hd(inv_a2h2 + w * y * y, 0.0);
      diag(j) = 1.0 + beta * hd;
      // rhs = (I - beta H) phi
      Complex r = (1.0 - beta * hd) * out.values(j);
      if (j > 0) r -= off_a * out.values(j - 1);
      if (j + 1 < m) r -= off_a * out.values(j + 1);
      rhs(j) = r;
    }
    solve_tridiagonal(diag, off_a, rhs, scratch);
    out.values.swap(rhs);

    out.time = psi.time + (k + 1) * dt;
    if (observer && opts.observer_stride > 0 &&
        ((k + 1) % opts.observer_stride == 0 || k + 1 == n_steps)) {
      WaveFunction snap = out;
      snap.width = problem.wall(out.time);
      snap.width_rate = problem.wall_rate(out.time);
      observer(snap);
    }
  }

  out.time = t_final;
  out.width = problem.wall(t_final);
  out.width_rate = problem.wall_rate(t_final);

  local.steps = n_steps;
  local.norm_drift = std::abs(out.norm() - norm0);
  local.resolution_ok = local.max_dt_omega <= 0.1;
  if (!local.resolution_ok && local.max_dt_omega > 0.0)
    local.suggested_dt = 0.1 * dt / local.max_dt_omega;
  if (stats) *stats = local;
  return out;
}

}  // namespace qpiston
