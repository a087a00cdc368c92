#pragma once

// Small derivative-free search utilities shared by the feasibility,
// brute-force, and thermodynamics modules: grid-seeded golden-section for
// 1-D extrema and a plain Nelder-Mead simplex for low-dimensional polish.

#include <Eigen/Core>

#include <functional>

namespace qpiston {

struct ScalarMaxResult {
  double x = 0.0;
  double value = 0.0;
};

///// Maximizes f on [lo, hi]: coarse scan on `grid` points, then golden-section
/// refinement of the best bracket to the given x tolerance.
ScalarMaxResult golden_section_max(const std::function<double(double)>& f, double lo,
                                   double hi, int grid = 10000, double tol = 1e-12);

struct NelderMeadOptions {
  int max_iters = 400;
  double f_tol = 1e-14;
  double x_tol = 1e-12;
  double initial_step = 0.1;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

/// Minimizes f starting from x0 (standard reflect/expand/contract/shrink
/// simplex). Deterministic for a fixed x0.
NelderMeadResult nelder_mead_min(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x0,
                                 const NelderMeadOptions& opts = {});

}  // namespace qpiston
