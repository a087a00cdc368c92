#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpiston/dynamics.hpp"
#include "qpiston/inverse.hpp"
#include "qpiston/optimal.hpp"

#include <cmath>
#include <random>

using namespace qpiston;

TEST_CASE("wall polynomial satisfies all six boundary conditions") {
  for (double gamma : {1.5, 4.0, 10.0, 100.0}) {
    CHECK(wall_polynomial(gamma, 0.0) == 1.0);
    CHECK(wall_polynomial(gamma, 1.0) == doctest::Approx(gamma).epsilon(1e-14));
    CHECK(wall_polynomial_d1(gamma, 0.0) == 0.0);
    CHECK(std::abs(wall_polynomial_d1(gamma, 1.0)) < 1e-12 * gamma);
    CHECK(wall_polynomial_d2(gamma, 0.0) == 0.0);
    CHECK(std::abs(wall_polynomial_d2(gamma, 1.0)) < 1e-11 * gamma);
  }
}

TEST_CASE("wall polynomial derivatives match finite differences") {
  const double gamma = 10.0, h = 1e-6;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> mid(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    const double tau = mid(rng);
    const double d1_fd =
        (wall_polynomial(gamma, tau + h) - wall_polynomial(gamma, tau - h)) / (2.0 * h);
    const double d2_fd = (wall_polynomial(gamma, tau + h) - 2.0 * wall_polynomial(gamma, tau) +
                          wall_polynomial(gamma, tau - h)) /
                         (h * h);
    CHECK(wall_polynomial_d1(gamma, tau) == doctest::Approx(d1_fd).epsilon(1e-8));
    CHECK(wall_polynomial_d2(gamma, tau) == doctest::Approx(d2_fd).epsilon(1e-3));
  }
}

TEST_CASE("stiffness profile scales exactly as one over duration squared") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> gdist(1.01, 50.0), taudist(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double gamma = gdist(rng), tau = taudist(rng);
    const double base = poly_control(gamma, 2.0, tau);
    // Doubling the duration divides the control by exactly four (dyadic scale,
    // so the identity holds bitwise in IEEE arithmetic).
    CHECK(poly_control(gamma, 4.0, tau) == base / 4.0);
    CHECK(poly_control(gamma, 1.0, tau) == base * 4.0);
  }
}

TEST_CASE("peak control magnitude and location for a tenfold expansion") {
  CHECK(peak_control_magnitude(10.0) == doctest::Approx(39.075562583).epsilon(1e-8));
  CHECK(peak_control_location(10.0) == doctest::Approx(0.139270502843).epsilon(1e-6));
  // The peak sits where the second derivative of |u| vanishes; verify it
  // dominates a dense sample of the profile.
  const double tmin = min_feasible_duration(10.0);
  double umin = 0.0, umax = 0.0;
  for (int k = 0; k <= 20000; ++k) {
    const double u = poly_control(10.0, tmin, k / 20000.0);
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  // At the minimum duration the unit bound is attained on the negative side.
  CHECK(umin >= -1.0 - 1e-9);
  CHECK(umin <= -1.0 + 1e-6);
  CHECK(umax < 0.9);
}

TEST_CASE("minimum feasible duration reproduces the tenfold-expansion value") {
  const double tmin = min_feasible_duration(10.0);
  CHECK(tmin == doctest::Approx(6.251044919298663).epsilon(1e-10));
  CHECK(tmin == doctest::Approx(6.2511).epsilon(2e-5));
  CHECK(tmin == doctest::Approx(std::sqrt(peak_control_magnitude(10.0))).epsilon(1e-14));
}

TEST_CASE("minimum feasible duration vanishes as gamma approaches one") {
  CHECK(min_feasible_duration(1.0 + 1e-6) < 1e-2);
  CHECK(min_feasible_duration(1.0 + 1e-6) > 0.0);
  // Monotone in gamma.
  double prev = 0.0;
  for (double gamma : {1.1, 2.0, 5.0, 10.0, 100.0}) {
    const double t = min_feasible_duration(gamma);
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("smooth plan hits the target boundary conditions") {
  const ExpansionPlan plan = inverse_expansion_plan(10.0);
  CHECK(plan.gamma == 10.0);
  CHECK(plan.method == PlanMethod::Inverse);
  CHECK(plan.schedule.empty());  // continuous control, no bang arcs
  CHECK(plan.state(0.0)(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(plan.state(0.0)(1)) < 1e-14);
  CHECK(plan.state(plan.duration)(0) == doctest::Approx(10.0).epsilon(1e-13));
  CHECK(std::abs(plan.state(plan.duration)(1)) < 1e-12);
  CHECK(plan.wall(0.5 * plan.duration) > 1.0);
  // Control clamps to the boundary values outside [0, T].
  CHECK(plan.control(-1.0) == plan.control(0.0));
  CHECK(plan.control(plan.duration + 1.0) == plan.control(plan.duration));
}

TEST_CASE("integrating the smooth control reproduces the closed-form path") {
  const ExpansionPlan plan = inverse_expansion_plan(10.0);
  const InterpolatedTrajectory traj =
      integrate_dense(State(1.0, 0.0), plan.control, plan.duration, 1e-4);
  double worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double t = plan.duration * k / 100.0;
    worst = std::max(worst, (traj.eval(t) - plan.state(t)).norm());
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("relaxed durations soften the control peak") {
  const double tmin = min_feasible_duration(10.0);
  const ExpansionPlan relaxed = inverse_expansion_plan(10.0, 2.0 * tmin);
  CHECK(relaxed.duration == doctest::Approx(2.0 * tmin));
  double worst = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double t = relaxed.duration * k / 4000.0;
    worst = std::max(worst, std::abs(relaxed.control(t)));
  }
  CHECK(worst == doctest::Approx(0.25).epsilon(1e-5));  // 1/T^2 scaling of the peak
}

TEST_CASE("infeasible requests are rejected") {
  CHECK_THROWS_AS(inverse_expansion_plan(1.0), std::invalid_argument);
  CHECK_THROWS_AS(inverse_expansion_plan(0.5), std::invalid_argument);
  const double tmin = min_feasible_duration(10.0);
  CHECK_THROWS_AS(inverse_expansion_plan(10.0, 0.5 * tmin), std::domain_error);
  CHECK_THROWS_AS(min_feasible_duration(1.0), std::invalid_argument);
}

TEST_CASE("smooth schedules are never faster than the time-optimal ones") {
  for (double gamma : {1.5, 4.0, 30.0}) {
    CHECK(min_feasible_duration(gamma) > solve_optimal(gamma).total);
  }
}
