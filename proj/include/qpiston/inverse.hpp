#pragma once

// Inverse-engineering baseline: quintic wall trajectory
// a(tau)/a0 = 1 + (gamma-1) tau^3 (6 tau^2 - 15 tau + 10), tau = t/T,
// the stiffness it implies, and the minimum duration compatible with the
// constraint |u| <= 1.

#include "qpiston/types.hpp"

namespace qpiston {

/// Scaled wall position a(tau)/a0 of the quintic ansatz.
template <typename Scalar>
Scalar wall_polynomial(Scalar gamma, Scalar tau) {
  return Scalar(1) + (gamma - Scalar(1)) * tau * tau * tau *
                         (Scalar(6) * tau * tau - Scalar(15) * tau + Scalar(10));
}

/// d/dtau of the quintic: 30 (gamma-1) tau^2 (tau-1)^2.
template <typename Scalar>
Scalar wall_polynomial_d1(Scalar gamma, Scalar tau) {
  const Scalar tm1 = tau - Scalar(1);
  return Scalar(30) * (gamma - Scalar(1)) * tau * tau * tm1 * tm1;
}

/// d^2/dtau^2 of the quintic: 60 (gamma-1) tau (2 tau^2 - 3 tau + 1).
template <typename Scalar>
Scalar wall_polynomial_d2(Scalar gamma, Scalar tau) {
  return Scalar(60) * (gamma - Scalar(1)) * tau *
         (Scalar(2) * tau * tau - Scalar(3) * tau + Scalar(1));
}

/// Normalized stiffness u(tau) = k(tau)/k0 of the inverse-engineered plan
/// with total duration T (in T0 units):
///   u = -(1/T^2) * P''(tau) / P(tau).
/// Vanishes at tau = 0, 1/2, 1; scales as 1/T^2.
template <typename Scalar>
Scalar poly_control(Scalar gamma, Scalar duration, Scalar tau) {
  return -wall_polynomial_d2(gamma, tau) /
         (duration * duration * wall_polynomial(gamma, tau));
}

/// Peak |u| * T^2 of the quintic plan: M(gamma) = max_tau |P''| / P.
/// Dense grid (1e4+ points) plus golden-section refinement of the best
/// bracket to ~1e-10 in tau.
double peak_control_magnitude(double gamma);

/// Location tau* in [0, 1] of the peak found by peak_control_magnitude.
double peak_control_location(double gamma);

/// Smallest duration T with max_tau |u(tau; gamma, T)| <= 1. Since u scales
/// as 1/T^2 this is exactly sqrt(M(gamma)). Rejects gamma <= 1.
double min_feasible_duration(double gamma);

/// Quintic expansion plan for the given gamma. `duration <= 0` selects the
/// minimum feasible duration; explicit durations below it violate |u| <= 1
/// and raise std::domain_error. The wall trajectory is evaluated from the
/// closed-form polynomial, not by integrating the control.
ExpansionPlan inverse_expansion_plan(double gamma, double duration = 0.0);

}  // namespace qpiston
