#include "qpiston/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qpiston {

ScalarMaxResult golden_section_max(const std::function<double(double)>& f, double lo,
                                   double hi, int grid, double tol) {
  if (!(hi > lo)) throw std::invalid_argument("golden_section_max: require lo < hi");
  if (grid < 2) throw std::invalid_argument("golden_section_max: require grid >= 2");

  // Coarse scan: locate the best sample and bracket it with its neighbours.
  const double h = (hi - lo) / (grid - 1);
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double x = (i == grid - 1) ? hi : lo + i * h;
    const double v = f(x);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + std::max(0, best - 1) * h;
  double b = std::min(hi, lo + (best + 1) * h);

  // Golden-section refinement of [a, b].
  constexpr double kInvPhi = 1.0 / std::numbers::phi_v<double>;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  const double fm = f(xm);
  ScalarMaxResult r{xm, fm};
  if (best_val > fm) r = {lo + best * h, best_val};  // guard against flat plateaus
  return r;
}

NelderMeadResult nelder_mead_min(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x0, const NelderMeadOptions& opts) {
  const int n = static_cast<int>(x0.size());
  if (n < 1) throw std::invalid_argument("nelder_mead_min: empty start point");

  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (int i = 0; i < n; ++i) {
    const double step = (x0(i) != 0.0) ? opts.initial_step * std::abs(x0(i))
                                       : opts.initial_step;
    pts[i + 1](i) += step;
  }
  for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  const auto order = [&] {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    std::vector<Eigen::VectorXd> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      p2[i] = pts[idx[i]];
      v2[i] = vals[idx[i]];
    }
    pts.swap(p2);
    vals.swap(v2);
  };

  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    order();
    const double spread_f = std::abs(vals[n] - vals[0]);
    double spread_x = 0.0;
    for (int i = 1; i <= n; ++i) spread_x = std::max(spread_x, (pts[i] - pts[0]).norm());
    if (spread_f < opts.f_tol && spread_x < opts.x_tol) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[i];
    centroid /= n;

    const Eigen::VectorXd refl = centroid + (centroid - pts[n]);
    const double f_refl = f(refl);
    if (f_refl < vals[0]) {
      const Eigen::VectorXd expd = centroid + 2.0 * (centroid - pts[n]);
      const double f_expd = f(expd);
      if (f_expd < f_refl) {
        pts[n] = expd;
        vals[n] = f_expd;
      } else {
        pts[n] = refl;
        vals[n] = f_refl;
      }
    } else if (f_refl < vals[n - 1]) {
      pts[n] = refl;
      vals[n] = f_refl;
    } else {
      const Eigen::VectorXd contr = centroid + 0.5 * (pts[n] - centroid);
      const double f_contr = f(contr);
      if (f_contr < vals[n]) {
        pts[n] = contr;
        vals[n] = f_contr;
      } else {
        for (int i = 1; i <= n; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }
  order();
  return {pts[0], vals[0], iter};
}

}  // namespace qpiston
