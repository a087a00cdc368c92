#pragma once

// Minimum-time expansion synthesis: closed-form one-switch bang-bang
// solution, Pontryagin certificate built from the adjoint system, and a
// brute-force multi-switch oracle that confirms optimality at coarse scale.

#include "qpiston/types.hpp"

#include <cstdint>
#include <vector>

namespace qpiston {

/// Closed-form minimum-time solution for expansion by a factor gamma > 1:
/// u = -1 for t_x, then u = +1 for t_y, with
///   t_x = asinh(sqrt((g^2-1)/2)),  t_y = asin(sqrt((g^2-1)/2)/g).
/// The switch state lies on both conserved curves x1^2 - x2^2 = 1 and
/// x1^2 + x2^2 = g^2.
struct OptimalSolution {
  double gamma = 1.0;
  double t_x = 0.0;
  double t_y = 0.0;
  double total = 0.0;
  State switch_state = State(1.0, 0.0);
};

/// Throws std::invalid_argument for gamma <= 1 (compression is the YX case
/// and out of scope).
OptimalSolution solve_optimal(double gamma);

/// Bang-bang plan of the closed-form solution, with closed-form state
/// evaluation along both arcs and boundary jumps recorded as metadata.
ExpansionPlan optimal_expansion_plan(const OptimalSolution& sol);
ExpansionPlan optimal_expansion_plan(double gamma);

/// Optimal plan with the three control jumps (at 0, t_x, and T) replaced by
/// linear ramps of duration delta, holding the total duration fixed. The
/// wall trajectory is re-derived by integrating the state equations, so the
/// endpoint drifts off (gamma, 0) and fidelity with the target suffers; the
/// drift vanishes as delta -> 0.
ExpansionPlan ramped_plan(const OptimalSolution& sol, double delta, double dt_step = 1e-5);

struct CertificateSample {
  double t = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double phi = 0.0;  // switching function, -lambda2
  double H = 0.0;    // control Hamiltonian lambda0 + l1 x2 - l2 x1 u
};

/// Pontryagin certificate for a bang-bang expansion plan.
///
/// Construction: lambda0 = -1 (gauge choice); the terminal costate is fixed
/// by the transversality-free endpoint conditions of the expansion problem,
/// H(T) = 0 with x(T) = (gamma, 0) and u = +1, giving lambda2(T) = -1/gamma;
/// the remaining degree of freedom lambda1(T) is pinned by requiring the
/// switching function to vanish at the schedule's last switch. The adjoint
/// system l1' = u l2, l2' = -l1 is then integrated backward along the
/// schedule and all maximum-principle conditions are re-checked numerically.
struct PMPCertificate {
  double lambda0 = -1.0;
  bool pass = false;
  double max_abs_H = 0.0;
  std::vector<double> phi_zero_times;
  std::vector<CertificateSample> samples;  // strided; endpoints included
  std::vector<std::string> violations;     // empty iff pass
};

PMPCertificate build_certificate(const ExpansionPlan& plan, double adjoint_dt = 1e-5,
                                 double h_tol = 1e-6, double switch_tol = 1e-6);

PMPCertificate build_certificate(const OptimalSolution& sol, double adjoint_dt = 1e-5);

struct BruteForceOptions {
  int max_switches = 3;         // <= 3
  double grid_step = 1e-3;      // duration grid for the free arcs
  double endpoint_tol = 1e-2;   // accepted |endpoint - (gamma, 0)|
  bool allow_negative = true;   // u = -1 arcs admissible
  bool allow_positive = true;   // u = +1 arcs admissible
  bool refine = true;           // Nelder-Mead polish of the best candidate
  int threads = 0;              // 0 = hardware concurrency
};

struct BruteForceResult {
  bool feasible = false;
  double duration = 0.0;
  ControlSchedule schedule;
  double endpoint_miss = 0.0;
  int effective_switches = 0;   // switches between arcs longer than grid/2
  std::uint64_t evaluated = 0;  // candidate schedules probed
};

/// Exhaustive search over bang-bang schedules with up to max_switches
/// switches between u = -1 and u = +1. Free arc durations live on the grid;
/// the last two arcs are completed in closed form (reach the target's
/// conserved conic, then ride it into (gamma, 0)), and the best candidate is
/// polished by a Nelder-Mead search over the raw durations with the endpoint
/// miss as a penalty. Candidates that breach x1 > 0 are rejected.
BruteForceResult brute_force_min_time(double gamma, const BruteForceOptions& opts = {});

}  // namespace qpiston
