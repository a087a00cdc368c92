#pragma once

// Normalized piston state model x1' = x2, x2' = -u x1 with |u| <= 1:
// closed-form propagation under constant controls, schedule composition,
// and a fixed-step RK4 integrator for arbitrary control signals.

#include "qpiston/types.hpp"

#include <cmath>
#include <functional>
#include <optional>

namespace qpiston {

// Threshold below which the constant-control flow switches to the series
// branch; keeps the drift limit u -> 0 free of 0/0 evaluations.
inline constexpr double kDriftControlEps = 1e-12;

/// Cosine-like and sine-like fundamental solutions of w'' = -u w:
/// c(0)=1, c'(0)=0 and s(0)=0, s'(0)=1, with c' = -u s and s' = c.
/// Rotation for u > 0, hyperbolic for u < 0, linear drift near u = 0.
template <typename Scalar>
void fundamental_pair(Scalar u, Scalar t, Scalar& c, Scalar& s) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  if (u > Scalar(kDriftControlEps)) {
    const Scalar w = sqrt(u);
    c = cos(w * t);
    s = sin(w * t) / w;
  } else if (u < Scalar(-kDriftControlEps)) {
    const Scalar w = sqrt(-u);
    c = cosh(w * t);
    s = sinh(w * t) / w;
  } else {
    const Scalar t2 = t * t;
    c = Scalar(1) - u * t2 / Scalar(2) + u * u * t2 * t2 / Scalar(24);
    s = t * (Scalar(1) - u * t2 / Scalar(6) + u * u * t2 * t2 / Scalar(120));
  }
}

/// Exact flow of the state equations for a constant control u over dt >= 0.
/// Conserves x1^2 - x2^2 when u = -1 and x1^2 + x2^2 when u = +1.
template <typename Scalar>
PhaseVec<Scalar> propagate_constant(const PhaseVec<Scalar>& x, Scalar u, Scalar dt) {
  Scalar c, s;
  fundamental_pair(u, dt, c, s);
  PhaseVec<Scalar> out;
  out(0) = c * x(0) + s * x(1);
  out(1) = -u * s * x(0) + c * x(1);
  return out;
}

inline State rhs(const State& x, double u) { return State(x(1), -u * x(0)); }

/// First time in (0, tmax] at which the constant-u flow from x reaches
/// x1 <= 0 (the wall collapses). Closed form per control branch; returns
/// nullopt when x1 stays positive on the whole interval.
std::optional<double> first_breach_time(const State& x, double u, double tmax);

/// Rescaled-time increment \int_0^dt dt'/x1(t')^2 along a constant-u arc.
/// Used for the quantum phase integrals; exact per segment.
double inverse_square_time(const State& x, double u, double dt);

/// Composes the exact constant-control flows over the schedule's segments.
/// `output_step > 0` adds dense samples at that spacing (plus every segment
/// boundary) for plotting; otherwise only boundaries are recorded.
/// A state-constraint breach truncates the trajectory and sets the flag.
Trajectory propagate_schedule(const State& x0, const ControlSchedule& schedule,
                              double output_step = 0.0);

/// Fixed-step classic RK4 for an arbitrary control signal u(t) on
/// [t0, t0 + duration]. Per-unit-time error is O(dt_step^4). Samples are
/// recorded every `output_step` (>= dt_step; 0 records every step).
Trajectory integrate_arbitrary(const State& x0, const std::function<double(double)>& u_of_t,
                               double duration, double dt_step = 1e-4,
                               double output_step = 0.0, double t0 = 0.0);

/// Dense trajectory with nodal derivatives; evaluates in between by cubic
/// Hermite interpolation (error O(h^4) on smooth arcs).
struct InterpolatedTrajectory {
  std::vector<double> t;
  std::vector<State> x;
  std::vector<State> xdot;

  State eval(double time) const;
};

/// Integrates u_of_t and keeps every RK4 node for later interpolation.
InterpolatedTrajectory integrate_dense(const State& x0,
                                       const std::function<double(double)>& u_of_t,
                                       double duration, double dt_step = 1e-5);

/// Largest |endpoint - (gamma, 0)| component-wise miss of a plan propagated
/// from (1, 0); plans are expected to land within solver tolerance.
double plan_endpoint_miss(const ExpansionPlan& plan);

}  // namespace qpiston
