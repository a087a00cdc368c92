#include "qpiston/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qpiston {

std::optional<double> first_breach_time(const State& x, double u, double tmax) {
  if (!(tmax > 0.0)) return std::nullopt;
  if (!(x(0) > 0.0)) return 0.0;

  double t_hit = std::numeric_limits<double>::infinity();
  if (u > kDriftControlEps) {
    // x1(t) = A cos(w t - theta0) with theta0 in (-pi/2, pi/2); the first
    // zero sits a quarter period past the phase angle.
    const double w = std::sqrt(u);
    const double theta0 = std::atan2(x(1) / w, x(0));
    t_hit = (theta0 + std::numbers::pi / 2.0) / w;
  } else if (u < -kDriftControlEps) {
    // x1(t) = x1 cosh(kt) + (x2/k) sinh(kt) reaches zero only if the
    // velocity is negative and strong enough: tanh(kt) = k x1 / (-x2) < 1.
    const double k = std::sqrt(-u);
    if (x(1) < 0.0 && k * x(0) < -x(1)) t_hit = std::atanh(k * x(0) / -x(1)) / k;
  } else {
    if (x(1) < 0.0) t_hit = x(0) / -x(1);
  }
  if (t_hit <= tmax) return t_hit;
  return std::nullopt;
}

double inverse_square_time(const State& x, double u, double dt) {
  if (dt == 0.0) return 0.0;
  const double q = u * x(0) * x(0) + x(1) * x(1);  // conserved along the arc
  const double q_scale = std::abs(u) * x(0) * x(0) + x(1) * x(1);
  if (std::abs(q) > 1e-14 * q_scale) {
    // d/dt (x2/x1) = -u - (x2/x1)^2 and q/x1^2 = u + (x2/x1)^2, so the
    // integral telescopes to the change of the log-derivative over q.
    const State xe = propagate_constant(x, u, dt);
    return (x(1) / x(0) - xe(1) / xe(0)) / q;
  }
  if (std::abs(u) <= kDriftControlEps) return dt / (x(0) * x(0));
  // q = 0 with u < 0: pure exponential arc x1(t) = x1 exp(s k t).
  const double k = std::sqrt(-u);
  const double s = (x(1) >= 0.0) ? 1.0 : -1.0;
  return (1.0 - std::exp(-2.0 * s * k * dt)) / (2.0 * s * k * x(0) * x(0));
}

Trajectory propagate_schedule(const State& x0, const ControlSchedule& schedule,
                              double output_step) {
  Trajectory traj;
  traj.samples.push_back({0.0, x0, schedule.control_at(0.0)});
  if (!state_admissible(x0)) {
    traj.breached = true;
    traj.breach_time = 0.0;
    return traj;
  }

  double t_base = 0.0;
  State x = x0;
  for (const auto& seg : schedule.segments()) {
    if (seg.duration == 0.0) continue;
    const auto breach = first_breach_time(x, seg.value, seg.duration);
    const double horizon = breach.value_or(seg.duration);

    if (output_step > 0.0) {
      for (double tau = output_step; tau < horizon; tau += output_step) {
        traj.samples.push_back(
            {t_base + tau, propagate_constant(x, seg.value, tau), seg.value});
      }
    }
    x = propagate_constant(x, seg.value, horizon);
    t_base += horizon;
    traj.samples.push_back({t_base, x, schedule.control_at(t_base)});

    if (breach) {
      traj.breached = true;
      traj.breach_time = t_base;
      return traj;
    }
  }
  return traj;
}

namespace {

State rk4_step(const State& x, const std::function<double(double)>& u_of_t, double t,
               double h) {
  const double um = u_of_t(t + 0.5 * h);
  const State k1 = rhs(x, u_of_t(t));
  const State k2 = rhs(x + 0.5 * h * k1, um);
  const State k3 = rhs(x + 0.5 * h * k2, um);
  const State k4 = rhs(x + h * k3, u_of_t(t + h));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Trajectory integrate_arbitrary(const State& x0, const std::function<double(double)>& u_of_t,
                               double duration, double dt_step, double output_step,
                               double t0) {
  Trajectory traj;
  traj.samples.push_back({t0, x0, u_of_t(t0)});
  if (!state_admissible(x0)) {
    traj.breached = true;
    traj.breach_time = t0;
    return traj;
  }
  if (!(duration > 0.0)) return traj;

  const long n = std::max(1L, std::lround(std::ceil(duration / dt_step - 1e-9)));
  const double h = duration / static_cast<double>(n);
  const long stride =
      (output_step > 0.0) ? std::max(1L, std::lround(output_step / h)) : 1L;

  State x = x0;
  for (long i = 0; i < n; ++i) {
    const double t = t0 + i * h;
    x = rk4_step(x, u_of_t, t, h);
    const double t_next = t0 + (i + 1) * h;
    if (!state_admissible(x)) {
      traj.samples.push_back({t_next, x, u_of_t(t_next)});
      traj.breached = true;
      traj.breach_time = t_next;
      return traj;
    }
    if ((i + 1) % stride == 0 || i + 1 == n)
      traj.samples.push_back({t_next, x, u_of_t(t_next)});
  }
  return traj;
}

State InterpolatedTrajectory::eval(double time) const {
  if (t.empty()) throw std::logic_error("InterpolatedTrajectory: empty");
  if (time <= t.front()) return x.front();
  if (time >= t.back()) return x.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
  const double h = t[i + 1] - t[i];
  const double s = (time - t[i]) / h;
  // Cubic Hermite basis on [0, 1].
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * x[i] + h10 * h * xdot[i] + h01 * x[i + 1] + h11 * h * xdot[i + 1];
}

InterpolatedTrajectory integrate_dense(const State& x0,
                                       const std::function<double(double)>& u_of_t,
                                       double duration, double dt_step) {
  InterpolatedTrajectory out;
  const long n = std::max(1L, std::lround(std::ceil(duration / dt_step - 1e-9)));
  const double h = duration / static_cast<double>(n);
  out.t.reserve(n + 1);
  out.x.reserve(n + 1);
  out.xdot.reserve(n + 1);

  State x = x0;
  out.t.push_back(0.0);
  out.x.push_back(x);
  out.xdot.push_back(rhs(x, u_of_t(0.0)));
  for (long i = 0; i < n; ++i) {
    const double t = i * h;
    x = rk4_step(x, u_of_t, t, h);
    out.t.push_back(t + h);
    out.x.push_back(x);
    out.xdot.push_back(rhs(x, u_of_t(t + h)));
  }
  return out;
}

double plan_endpoint_miss(const ExpansionPlan& plan) {
  State end;
  if (!plan.schedule.empty()) {
    end = propagate_schedule(State(1.0, 0.0), plan.schedule).final_state();
  } else {
    end = integrate_arbitrary(State(1.0, 0.0), plan.control, plan.duration, 1e-5)
              .final_state();
  }
  return std::max(std::abs(end(0) - plan.gamma), std::abs(end(1)));
}

}  // namespace qpiston
