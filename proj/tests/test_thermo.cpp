#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpiston/inverse.hpp"
#include "qpiston/optimal.hpp"
#include "qpiston/thermo.hpp"

#include <cmath>
#include <utility>

using namespace qpiston;

TEST_CASE("heat extracted per cycle follows the two-isochore balance") {
  OttoCycleSpec spec{1.0, 4.0, 4.0};
  CHECK(heat_extracted(spec) == doctest::Approx(3.0 / 8.0).epsilon(1e-15));

  spec.gamma = 2.0;  // exactly the feasibility boundary: Q = 0
  CHECK(heat_extracted(spec) == doctest::Approx(0.0));
  CHECK(cooling_rate(spec) == 0.0);

  spec.gamma = 1.5;  // below the boundary: heating, not cooling
  CHECK(heat_extracted(spec) < 0.0);
  CHECK_THROWS_AS(cooling_rate(spec), std::domain_error);
}

TEST_CASE("cooling rate divides the heat by the stroke duration") {
  const OttoCycleSpec spec{1.0, 4.0, 4.0};
  CHECK(cooling_rate(spec) ==
        doctest::Approx((3.0 / 8.0) / solve_optimal(4.0).total).epsilon(1e-14));
  CHECK(cooling_rate(spec, ExpansionTimeModel::Inverse) ==
        doctest::Approx((3.0 / 8.0) / min_feasible_duration(4.0)).epsilon(1e-14));
  // Faster strokes give a strictly higher rate.
  CHECK(cooling_rate(spec) > cooling_rate(spec, ExpansionTimeModel::Inverse));
}

TEST_CASE("expansion-time models dispatch to the two planners") {
  CHECK(expansion_time(10.0, ExpansionTimeModel::Optimal) ==
        doctest::Approx(solve_optimal(10.0).total));
  CHECK(expansion_time(10.0, ExpansionTimeModel::Inverse) ==
        doctest::Approx(min_feasible_duration(10.0)));
}

TEST_CASE("cycle specs are validated") {
  CHECK_THROWS_AS((OttoCycleSpec{1.0, 0.5, 4.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OttoCycleSpec{1.0, 1.0, 4.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OttoCycleSpec{-1.0, 4.0, 4.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OttoCycleSpec{1.0, 4.0, 1.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((OttoCycleSpec{1.0, 4.0, 4.0}.validate()));
}

TEST_CASE("feasibility boundary is the square root of the temperature ratio") {
  CHECK(feasibility_boundary(1.0, 4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(feasibility_boundary(0.01, 1.0) == doctest::Approx(10.0).epsilon(1e-15));
  // Just above the boundary the rate is positive but tiny.
  const double g0 = feasibility_boundary(0.01, 1.0);
  const OttoCycleSpec near{0.01, 1.0, g0 * (1.0 + 1e-10)};
  CHECK(cooling_rate(near) > 0.0);
  CHECK(cooling_rate(near) < 1e-11);
}

TEST_CASE("cooling rate decays logarithmically for huge expansions") {
  const double r3 = cooling_rate({0.01, 1.0, 1e3});
  const double r5 = cooling_rate({0.01, 1.0, 1e5});
  CHECK(r5 > 0.0);
  CHECK(r5 < r3);  // past the optimum the rate falls off as 1/ln(gamma)
}

TEST_CASE("maximum cooling rate reproduces the frozen optima") {
  const MaxRateResult a = max_cooling_rate(1e-2, 1.0);
  CHECK(a.gamma_star == doctest::Approx(31.9053022112).epsilon(1e-4));
  CHECK(a.rate_star == doctest::Approx(9.81403562e-4).epsilon(1e-8));
  CHECK(a.bound == doctest::Approx(-1e-2 / std::log(1e-2)).epsilon(1e-14));

  const MaxRateResult b = max_cooling_rate(1e-3, 1.0);
  CHECK(b.gamma_star == doctest::Approx(112.753495362).epsilon(1e-4));
  CHECK(b.rate_star == doctest::Approx(7.86512782697e-5).epsilon(1e-8));

  const MaxRateResult c = max_cooling_rate(1e-4, 1.0);
  CHECK(c.gamma_star == doctest::Approx(389.80971299).epsilon(1e-4));
  CHECK(c.rate_star == doctest::Approx(6.58099921389e-6).epsilon(1e-8));

  // The optimum is a genuine interior maximum of R over gamma.
  for (const auto& r : {a, b, c}) CHECK(r.rate_star > 0.0);
  const double tau = 1e-2;
  CHECK(cooling_rate({tau, 1.0, a.gamma_star * 1.2}) < a.rate_star);
  CHECK(cooling_rate({tau, 1.0, a.gamma_star / 1.2}) < a.rate_star);

  // First-order stationarity: the centered slope of R at gamma_star is
  // negligible against the natural scale R* / gamma*.
  const std::pair<double, const MaxRateResult*> cases[] = {
      {1e-2, &a}, {1e-3, &b}, {1e-4, &c}};
  for (const auto& [tau_c, r] : cases) {
    const double h = 1e-4 * r->gamma_star;
    const double slope = (cooling_rate({tau_c, 1.0, r->gamma_star + h}) -
                          cooling_rate({tau_c, 1.0, r->gamma_star - h})) /
                         (2.0 * h);
    CHECK(std::abs(slope) * r->gamma_star / r->rate_star < 1e-6);
  }
}

TEST_CASE("vanishing-temperature bound caps the achievable rate") {
  double prev_ratio = std::numeric_limits<double>::infinity();
  for (double tau_c : {1e-2, 1e-3, 1e-4}) {
    const MaxRateResult r = max_cooling_rate(tau_c, 1.0);
    CHECK(r.rate_star < r.bound);
    const double ratio = r.rate_star / tau_c;
    CHECK(ratio < prev_ratio);  // R*/tau_c decreases as tau_c -> 0
    prev_ratio = ratio;
  }
}

TEST_CASE("slower inverse-engineered strokes lower the achievable rate") {
  const MaxRateResult opt = max_cooling_rate(1e-2, 1.0);
  const MaxRateResult inv = max_cooling_rate(1e-2, 1.0, ExpansionTimeModel::Inverse);
  CHECK(inv.rate_star < opt.rate_star);
  CHECK(inv.rate_star > 0.0);
  CHECK(inv.rate_star < inv.bound);
}

TEST_CASE("rate maximization validates its inputs") {
  CHECK_THROWS_AS(max_cooling_rate(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(max_cooling_rate(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(max_cooling_rate(1e-2, 1.0, ExpansionTimeModel::Optimal, 5.0),
                  std::invalid_argument);  // cap below the feasibility boundary
}
