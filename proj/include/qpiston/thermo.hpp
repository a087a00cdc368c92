#pragma once

// Otto-cycle refrigerator built on the expanding piston: heat extracted per
// cycle, cooling rate with the expansion stroke dominating the cycle time,
// and the third-law bound R < -tau_c / ln(tau_c).

#include <stdexcept>

namespace qpiston {

/// Reservoir temperatures in energy units (Boltzmann constant = 1) and the
/// expansion factor of the adiabatic stroke.
struct OttoCycleSpec {
  double tau_c = 0.0;  // cold reservoir
  double tau_h = 0.0;  // hot reservoir
  double gamma = 1.0;

  void validate() const {
    if (!(tau_c > 0.0) || !(tau_h > tau_c))
      throw std::invalid_argument("OttoCycleSpec: require 0 < tau_c < tau_h");
    if (!(gamma > 1.0)) throw std::invalid_argument("OttoCycleSpec: require gamma > 1");
  }
};

enum class ExpansionTimeModel { Optimal, Inverse };

/// Expansion-stroke duration T(gamma) in T0 units under the chosen strategy.
double expansion_time(double gamma, ExpansionTimeModel model);

/// Heat extracted from the cold reservoir per cycle,
/// Q = tau_c/2 - tau_h/(2 gamma^2). May be <= 0 (infeasible operating point;
/// the refrigerator needs gamma > sqrt(tau_h/tau_c)).
double heat_extracted(const OttoCycleSpec& spec);

/// Smallest expansion factor with Q > 0.
double feasibility_boundary(double tau_c, double tau_h);

/// Cooling rate R = Q / T(gamma); the cycle time is dominated by the
/// expansion stroke. Q = 0 returns 0; Q < 0 throws std::domain_error.
double cooling_rate(const OttoCycleSpec& spec,
                    ExpansionTimeModel model = ExpansionTimeModel::Optimal);

struct MaxRateResult {
  double gamma_star = 0.0;
  double rate_star = 0.0;
  double bound = 0.0;  // -tau_c / ln(tau_c), the tau_c -> 0 restriction
};

/// Maximizes R over gamma in (sqrt(tau_h/tau_c), gamma_max] by a log-spaced
/// grid plus golden-section refinement.
MaxRateResult max_cooling_rate(double tau_c, double tau_h,
                               ExpansionTimeModel model = ExpansionTimeModel::Optimal,
                               double gamma_max = 1e6);

}  // namespace qpiston
