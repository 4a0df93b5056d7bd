#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "harness.hpp"
#include "integrator.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace rdde;
using testing_support::make_problem;

TEST_CASE("breaking points") {
  const auto unit = breaking_points(validate(make_problem("0", "0", "1", "1", "1", 0, 4)));
  REQUIRE(unit.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(unit[i] == doctest::Approx(i).epsilon(1e-12));

  CHECK(breaking_points(validate(make_problem("0", "0", "1", "0", "1", 0, 4))) ==
        std::vector<double>{0.0});

  const auto quarter = breaking_points(validate(make_problem("0", "0", "1", "(1+t)/4", "1", 0, 1)));
  REQUIRE(quarter.size() >= 3);
  CHECK(quarter[0] == 0.0);
  CHECK(std::fabs(quarter[1] - oracle::kQuarterDelayBreak1) <= 1e-12);
  CHECK(std::fabs(quarter[2] - oracle::kQuarterDelayBreak2) <= 1e-12);
  const double cross = oracle::bisect(
      [](double t) { return t - (1 + t) / 4 - oracle::kQuarterDelayBreak2; }, 0.0, 1.0);
  if (quarter.size() > 3) CHECK(std::fabs(quarter[3] - cross) <= 1e-11);
}

TEST_CASE("mesh lands on breaking points and tf") {
  const ValidatedProblem v = validate(make_problem("0", "0", "1", "(1+t)/4", "1", 0, 1));
  const auto br = breaking_points(v);
  const auto mesh = integration_mesh(v, br);
  CHECK(mesh.front() == 0.0);
  CHECK(mesh.back() == 1.0);
  for (double b : br) CHECK(std::find(mesh.begin(), mesh.end(), b) != mesh.end());
  for (std::size_t i = 1; i < mesh.size(); ++i) {
    CHECK(mesh[i] > mesh[i - 1]);
    CHECK(mesh[i] - mesh[i - 1] <= 1e-3 * (1 + 1e-6));
  }
}

TEST_CASE("zero right side keeps the constant history") {
  const Trajectory tr = integrate(validate(make_problem("0", "0", "0", "0.5", "1", 0, 3)));
  for (double t : {-0.5, -0.1, 0.0, 0.37, 1.5, 3.0}) {
    const StateSample s = tr.sample(t);
    CHECK(s.y == 1.0);
    CHECK(s.y1 == 0.0);
    CHECK(s.y2 == 0.0);
    CHECK(s.y3 == 0.0);
  }
}

TEST_CASE("cubic drop matches its closed form") {
  const Trajectory tr = integrate(validate(testing_support::cubic_drop()));
  double worst = 0.0;
  for (double t : tr.nodes()) worst = std::max(worst, std::fabs(tr.sample(t).y - oracle::cubic_drop(t)[0]));
  CHECK(worst <= 1e-10);
  CHECK(std::fabs(tr.sample(1.0).y - oracle::kCubicDropAtOne) <= 1e-10);

  const StateSample mid = tr.sample(0.5);
  const auto ref = oracle::cubic_drop(0.5);
  CHECK(mid.y == doctest::Approx(0.9791666667).epsilon(1e-10));
  CHECK(std::fabs(mid.y - ref[0]) <= 1e-12);
  CHECK(std::fabs(mid.y1 - ref[1]) <= 1e-12);
  CHECK(std::fabs(mid.y2 - ref[2]) <= 1e-12);
  CHECK(mid.y3 == -1.0);
}

TEST_CASE("zero delay decay matches e^-t") {
  const Trajectory tr = integrate(validate(testing_support::decay()));
  double worst = 0.0;
  for (double t : tr.nodes()) worst = std::max(worst, std::fabs(tr.sample(t).y - oracle::decay(t)));
  CHECK(worst <= 1e-8);
  CHECK(tr.sample(1.0).y == doctest::Approx(oracle::kDecayAtOne).epsilon(1e-9));
}

TEST_CASE("convergence order on the decay problem") {
  const ConvergenceResult c = convergence_study(testing_support::decay(), {4e-3, 2e-3, 1e-3},
                                                oracle::decay);
  REQUIRE(c.orders.size() == 2);
  for (double o : c.orders) CHECK(o >= 3.5);

  const ConvergenceResult exact = convergence_study(testing_support::cubic_drop(),
                                                    {4e-3, 2e-3, 1e-3},
                                                    [](double t) { return oracle::cubic_drop(t)[0]; });
  for (double e : exact.errors) CHECK(e <= 1e-13);

  const ConvergenceResult zero = convergence_study(
      make_problem("1", "0.5", "-1", "0.3", "0", 0, 1), {4e-3, 2e-3, 1e-3});
  REQUIRE(zero.errors.size() == 2);
  for (double e : zero.errors) CHECK(e == 0.0);
}

TEST_CASE("splice at t0 reproduces the history") {
  const Problem p = make_problem("0.7", "-0.3", "1.2", "0.4 + 0.1*sin(t)", "0.3 - t + 0.5*t^3", 0, 2);
  const ValidatedProblem v = validate(p);
  const Trajectory tr = integrate(v);
  const StateSample s = tr.sample(0.0);
  const Jet h = v.history_state(0.0);
  CHECK(s.y == h.y);
  CHECK(s.y1 == h.y1);
  CHECK(s.y2 == h.y2);
}

TEST_CASE("third derivative is the equation's right side") {
  const Problem p = make_problem("0.7", "-0.3", "1.2", "0.4 + 0.1*sin(t)", "0.3 - t + 0.5*t^3", 0, 2);
  const ValidatedProblem v = validate(p);
  const Trajectory tr = integrate(v);
  for (double t : {0.01, 0.5, 1.234, 2.0}) {
    const double sig = t - v.delay(t);
    const StateSample d = tr.sample(sig);
    const double rhs = -(v.coefficient(1, t) * d.y2 + v.coefficient(2, t) * d.y1 +
                         v.coefficient(3, t) * d.y);
    CHECK(tr.sample(t).y3 == doctest::Approx(rhs).epsilon(1e-14));
  }
}

TEST_CASE("dense output is self-consistent") {
  const ScenarioSpec sc = generate_scenario(3);
  const Trajectory tr = integrate(validate(sc.problem));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto steps = tr.steps();
  for (std::size_t k = 0; k < steps.size(); k += std::max<std::size_t>(1, steps.size() / 50)) {
    const StepRecord& st = steps[k];
    for (int n = 0; n < 100; ++n) {
      const double t = st.ta + (st.tb - st.ta) * u(rng);
      for (int c = 0; c < 2; ++c) {
        const double slope =
            hermite_slope(st.ta, st.tb, st.xa[c], st.xb[c], st.fa[c], st.fb[c], t);
        const double next = tr.lower_state(t)[c + 1];
        const double scale = std::max({1.0, std::fabs(st.xa[c + 1]), std::fabs(st.xb[c + 1])});
        CHECK(std::fabs(slope - next) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("lower state is continuous across breaking points") {
  const Trajectory tr = integrate(validate(make_problem("0.5", "-1", "1", "(1+t)/4", "1 + t - t^2", 0, 1)));
  const auto br = tr.breaking();
  for (std::size_t b = 1; b < br.size(); ++b) {
    const double xi = br[b];
    if (xi >= tr.domain_end()) continue;
    const auto steps = tr.steps();
    const auto right = std::find_if(steps.begin(), steps.end(),
                                    [&](const StepRecord& s) { return s.ta == xi; });
    REQUIRE(right != steps.end());
    REQUIRE(right != steps.begin());
    const StepRecord& left = *(right - 1);
    for (int c = 0; c < 3; ++c) {
      const double scale = 1.0 + std::fabs(right->xa[c]);
      CHECK(std::fabs(left.xb[c] - right->xa[c]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("sampling outside the domain is an error") {
  const Trajectory tr = integrate(validate(testing_support::cubic_drop()));
  CHECK_THROWS_AS(tr.sample(-1.5), DomainError);
  CHECK_THROWS_AS(tr.sample(1.1), DomainError);
  CHECK_NOTHROW(tr.sample(-1.0));
  CHECK_NOTHROW(tr.sample(1.0));
}

TEST_CASE("blow-up surfaces as an integration error") {
  Problem p = make_problem("0", "0", "-1e9", "0", "1", 0, 1);
  CHECK_THROWS_AS(integrate(validate(p)), IntegrationError);
}
