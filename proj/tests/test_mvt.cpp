#include <doctest.h>

#include <cmath>

#include "harness.hpp"
#include "mvt.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace rdde;
using testing_support::make_problem;

TEST_CASE("cubic drop points at t_k = 1") {
  const Trajectory tr = integrate(validate(testing_support::cubic_drop()));
  const MvtPoints mv = locate_mvt_points(tr, 1.0);
  CHECK(mv.delay == 1.0);
  CHECK(std::fabs(mv.points[0] - oracle::kCubicDropPoint0) <= 1e-8);
  CHECK(std::fabs(mv.points[1] - oracle::kCubicDropPoint1) <= 1e-8);
  CHECK(std::fabs(mv.slopes[0] - oracle::kCubicDropSlope0) <= 1e-10);
  CHECK(std::fabs(mv.slopes[1] - oracle::kCubicDropSlope1) <= 1e-10);
  CHECK(std::fabs(mv.slopes[2] - oracle::kCubicDropSlope2) <= 1e-10);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::fabs(mv.residuals[i]) <= 1e-8);
    CHECK(mv.points[i] >= 0.0);
    CHECK(mv.points[i] <= 1.0);
  }
  // w''' = -1 on the whole window; any point is valid
  CHECK(mv.magnitudes[2] == doctest::Approx(1.0));
  CHECK(mv.magnitudes[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
  CHECK(mv.magnitudes[1] == doctest::Approx(0.5).epsilon(1e-8));

  // cross-check against a plain bisection on the closed form
  const double root = oracle::bisect(
      [](double s) { return oracle::cubic_drop(s)[1] - oracle::kCubicDropSlope0; }, 0.0, 1.0);
  CHECK(std::fabs(mv.points[0] - root) <= 1e-8);
}

TEST_CASE("preconditions") {
  const Trajectory zero = integrate(validate(testing_support::decay()));
  CHECK_THROWS_AS(locate_mvt_points(zero, 0.5), DomainError);
  const Trajectory tr = integrate(validate(testing_support::cubic_drop()));
  CHECK_THROWS_AS(locate_mvt_points(tr, 1.5), DomainError);
  CHECK_THROWS_AS(locate_mvt_points(tr, -0.5), DomainError);
  CHECK_NOTHROW(locate_mvt_points(tr, 0.0));
}

TEST_CASE("affine segment gives vanishing residuals") {
  // y = 2 + 3 t with zero coefficients: w' constant, every sample is a root
  const Trajectory tr = integrate(validate(make_problem("0", "0", "0", "0.6", "2 + 3*t", 0, 2)));
  for (double tk : {0.0, 0.3, 1.0, 2.0}) {
    const MvtPoints mv = locate_mvt_points(tr, tk);
    CHECK(std::fabs(mv.residuals[0]) <= 1e-12 * 5.0);
    CHECK(mv.magnitudes[0] == doctest::Approx(3.0));
  }
}

TEST_CASE("points stay inside the window on smooth segments") {
  const ScenarioSpec sc = generate_scenario(1);
  REQUIRE_FALSE(sc.zero_delay);
  const ValidatedProblem v = validate(sc.problem);
  const Trajectory tr = integrate(v);
  const auto br = tr.breaking();
  const auto nodes = tr.nodes();
  for (std::size_t k = 0; k < nodes.size(); k += 7) {
    const double tk = nodes[k];
    const MvtPoints mv = locate_mvt_points(tr, tk);
    const double a = tk - mv.delay;
    bool smooth = true;
    for (double b : br) smooth = smooth && !(b > a && b < tk);
    for (int i = 0; i < 3; ++i) {
      CHECK(mv.points[i] >= a - kTimeSlack);
      CHECK(mv.points[i] <= tk);
      CHECK(std::isfinite(mv.residuals[i]));
      if (smooth) CHECK(std::fabs(mv.residuals[i]) <= 1e-8 * (1.0 + std::fabs(mv.slopes[i])));
    }
  }
}

TEST_CASE("a jump of w''' inside the window yields a generalized point") {
  // history third derivative is 0, the equation gives -1 immediately after t0:
  // the average -t_k / delay of w''' lies strictly between the one-sided values
  const Trajectory tr = integrate(validate(make_problem("0", "0", "1", "0.5", "1", 0, 1)));
  const MvtPoints mv = locate_mvt_points(tr, 0.25);
  CHECK(mv.generalized[2]);
  CHECK(std::fabs(mv.points[2]) <= 1e-12);
  CHECK(mv.residuals[2] == 0.0);
  CHECK(mv.magnitudes[2] == doctest::Approx(std::fabs(mv.slopes[2])));
  CHECK(mv.slopes[2] == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK_FALSE(mv.generalized[0]);
  CHECK_FALSE(mv.generalized[1]);
}
