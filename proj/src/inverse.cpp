#include "qpiston/inverse.hpp"

#include "qpiston/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpiston {

namespace {

ScalarMaxResult peak_search(double gamma) {
  if (!(gamma > 1.0))
    throw std::invalid_argument("inverse engineering: require gamma > 1");
  // |P''|/P is smooth with two humps (P'' changes sign at tau = 1/2); the
  // dense scan inside golden_section_max picks the global one.
  return golden_section_max(
      [gamma](double tau) {
        return std::abs(wall_polynomial_d2(gamma, tau)) / wall_polynomial(gamma, tau);
      },
      0.0, 1.0, 10001, 1e-12);
}

}  // namespace

double peak_control_magnitude(double gamma) { return peak_search(gamma).value; }

double peak_control_location(double gamma) { return peak_search(gamma).x; }

double min_feasible_duration(double gamma) {
  // |u| = |P''| / (T^2 P) <= 1 is tight exactly at T^2 = max |P''|/P.
  return std::sqrt(peak_control_magnitude(gamma));
}

ExpansionPlan inverse_expansion_plan(double gamma, double duration) {
  if (!(gamma > 1.0))
    throw std::invalid_argument("inverse_expansion_plan: require gamma > 1");
  const double t_min = min_feasible_duration(gamma);
  if (duration > 0.0 && duration < t_min * (1.0 - 1e-12))
    throw std::domain_error(
        "inverse_expansion_plan: duration below the |u| <= 1 feasibility minimum");
  const double T = duration > 0.0 ? duration : t_min;

  ExpansionPlan plan;
  plan.gamma = gamma;
  plan.duration = T;
  plan.method = PlanMethod::Inverse;
  plan.control = [gamma, T](double t) {
    const double tau = std::clamp(t / T, 0.0, 1.0);
    return poly_control(gamma, T, tau);
  };
  plan.state = [gamma, T](double t) {
    const double tau = std::clamp(t / T, 0.0, 1.0);
    return State(wall_polynomial(gamma, tau), wall_polynomial_d1(gamma, tau) / T);
  };
  return plan;
}

}  // namespace qpiston
