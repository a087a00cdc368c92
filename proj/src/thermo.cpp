#include "qpiston/thermo.hpp"

#include "qpiston/inverse.hpp"
#include "qpiston/optimal.hpp"
#include "qpiston/search.hpp"

#include <cmath>

namespace qpiston {

double expansion_time(double gamma, ExpansionTimeModel model) {
  return model == ExpansionTimeModel::Optimal ? solve_optimal(gamma).total
                                              : min_feasible_duration(gamma);
}

double heat_extracted(const OttoCycleSpec& spec) {
  spec.validate();
  return 0.5 * spec.tau_c - 0.5 * spec.tau_h / (spec.gamma * spec.gamma);
}

double feasibility_boundary(double tau_c, double tau_h) {
  if (!(tau_c > 0.0) || !(tau_h > tau_c))
    throw std::invalid_argument("feasibility_boundary: require 0 < tau_c < tau_h");
  return std::sqrt(tau_h / tau_c);
}

double cooling_rate(const OttoCycleSpec& spec, ExpansionTimeModel model) {
  const double q = heat_extracted(spec);
  if (q < 0.0)
    throw std::domain_error("cooling_rate: expansion factor below the feasibility "
                            "boundary (heat would flow backward)");
  if (q == 0.0) return 0.0;
  return q / expansion_time(spec.gamma, model);
}

MaxRateResult max_cooling_rate(double tau_c, double tau_h, ExpansionTimeModel model,
                               double gamma_max) {
  const double g_lo = feasibility_boundary(tau_c, tau_h);
  if (!(gamma_max > g_lo))
    throw std::invalid_argument(
        "max_cooling_rate: gamma_max must exceed the feasibility boundary");

  // Search in log(gamma): the rate rises from 0 at the boundary, peaks, and
  // decays like 1/ln(gamma); the log grid resolves both regimes. Roundoff at
  // the boundary is clamped to zero instead of raising.
  auto rate_of_log = [&](double lg) {
    const double g = std::exp(lg);
    const double q = 0.5 * tau_c - 0.5 * tau_h / (g * g);
    if (q <= 0.0) return 0.0;
    return q / expansion_time(g, model);
  };
  const auto peak =
      golden_section_max(rate_of_log, std::log(g_lo), std::log(gamma_max), 4096, 1e-10);

  MaxRateResult result;
  result.gamma_star = std::exp(peak.x);
  result.rate_star = peak.value;
  result.bound = -tau_c / std::log(tau_c);
  return result;
}

}  // namespace qpiston
