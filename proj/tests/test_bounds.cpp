#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "bounds.hpp"
#include "harness.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace rdde;
using testing_support::make_problem;

TEST_CASE("norm") {
  CHECK(norm_state(1, 0, 0) == 1.0);
  CHECK(norm_state(1, 2, 2) == 3.0);
  CHECK(norm_state(0, 0, 0) == 0.0);
  CHECK_THROWS_AS(norm_state(NAN, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(norm_state(0, INFINITY, 0), std::invalid_argument);
}

TEST_CASE("rates from magnitudes") {
  CHECK(psi_from_magnitudes({0, 0, 0}, {5, 6, 7}) == 1.0);
  CHECK(psi_from_magnitudes({1, 0, 0}, {0, 0, 2}) == 4.0);
  CHECK(psi_zero_delay({1, 1, 1}) == 4.0);
  CHECK(psi_zero_delay({0, 0, 0}) == 1.0);
}

TEST_CASE("dominating rate of the cubic drop") {
  const Trajectory tr = integrate(validate(testing_support::cubic_drop()));
  CHECK(psi_global(tr) == doctest::Approx(oracle::kCubicDropPsiStar).epsilon(1e-12));
  const Trajectory flat = integrate(validate(testing_support::constant_one()));
  CHECK(psi_global(flat) == 1.0);
}

TEST_CASE("delay bounds and third derivative bound on the cubic drop") {
  const ValidatedProblem v = validate(testing_support::cubic_drop());
  const Trajectory tr = integrate(v);
  const MvtPoints mv = locate_mvt_points(tr, 1.0);
  const auto d = check_delay_bounds(tr, 1.0, mv);
  // |w(0)| = 1 <= 5/6 + 1/6
  CHECK(d[0].lhs == doctest::Approx(1.0));
  CHECK(d[0].rhs == doctest::Approx(1.0).epsilon(1e-8));
  for (const auto& r : d) CHECK(r.pass);
  CHECK(d[0].name == "delayed_value_bound_0");
  CHECK(d[2].name == "delayed_value_bound_2");

  const CheckRecord r = check_derivative_bound(tr, 1.0, mv, v.sup());
  CHECK(r.name == "third_derivative_bound");
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.pass);
}

TEST_CASE("equality cases on a constant solution") {
  const Trajectory tr = integrate(validate(testing_support::constant_one()));
  const MvtPoints mv = locate_mvt_points(tr, 1.0);
  for (const auto& r : check_delay_bounds(tr, 1.0, mv)) CHECK(r.pass);
  const auto d = check_delay_bounds(tr, 1.0, mv);
  CHECK(d[0].lhs == 1.0);
  CHECK(d[0].rhs == 1.0);
  const NormTrace trace = norm_trace(tr);
  PsiSummary psi;
  psi.pointwise.assign(trace.size(), 1.0);
  psi.global = 1.0;
  for (std::size_t k = 0; k < trace.size(); k += 100) {
    CHECK(check_differential_inequality(trace, psi, k).pass);
    CHECK(trace.du[k] == 0.0);
  }
  const EnvelopeResult env = check_envelope(trace, 1.0);
  CHECK(env.upper.violations == 0);
  CHECK(env.lower.violations == 0);
}

TEST_CASE("zero solution passes trivially") {
  const Trajectory tr = integrate(validate(make_problem("1", "-2", "0.5", "0.5", "0", 0, 1)));
  const NormTrace trace = norm_trace(tr);
  for (double n : trace.norm) CHECK(n == 0.0);
  const EnvelopeResult env = check_envelope(trace, 1.0);
  CHECK(env.upper.violations == 0);
  CHECK(env.lower.violations == 0);
  CHECK(env.upper.evaluated == trace.size() * trace.size());
}

TEST_CASE("energy of the decay problem") {
  const Trajectory tr = integrate(validate(testing_support::decay()));
  const NormTrace trace = norm_trace(tr);
  for (std::size_t k = 0; k < trace.size(); k += 50) {
    const double t = trace.samples[k].t;
    CHECK(trace.u[k] == doctest::Approx(3.0 * std::exp(-2.0 * t)).epsilon(1e-10));
    CHECK(trace.du[k] == doctest::Approx(-6.0 * std::exp(-2.0 * t)).epsilon(1e-10));
    const StateSample& w = trace.samples[k];
    CHECK(trace.u[k] == w.y * w.y + w.y1 * w.y1 + w.y2 * w.y2);
    CHECK(trace.norm[k] == std::sqrt(trace.u[k]));
    CHECK(check_energy_rate(trace, k).pass);
  }
  const VerificationReport rep = run_verification(validate(testing_support::decay()));
  CHECK(rep.pass);
  CHECK(rep.psi_star >= 2.0);
}

TEST_CASE("analytic energy rate agrees with finite differences") {
  const ScenarioSpec sc = generate_scenario(5);
  const Trajectory tr = integrate(validate(sc.problem));
  const NormTrace trace = norm_trace(tr);
  const auto br = tr.breaking();
  std::mt19937_64 rng(3);
  int checked = 0;
  while (checked < 100) {
    const std::size_t k = 1 + rng() % (trace.size() - 2);
    const double t = trace.samples[k].t;
    bool smooth = true;
    for (double b : br) smooth = smooth && std::fabs(b - t) > 2e-3;
    if (!smooth) continue;
    const double h = 1e-5;
    const auto u_at = [&](double s) {
      const auto x = tr.lower_state(s);
      return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    };
    const double fd = (u_at(t + h) - u_at(t - h)) / (2 * h);
    CHECK(std::fabs(fd - trace.du[k]) <= 1e-4 * (1.0 + std::fabs(trace.du[k])));
    ++checked;
  }
}

TEST_CASE("elementary product bound") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 10000; ++i) {
    const double f = u(rng), g = u(rng);
    CHECK(2 * std::fabs(f) * std::fabs(g) <= f * f + g * g + 1e-9 * (f * f + g * g));
  }
}

TEST_CASE("records and stats") {
  const CheckRecord ok = make_record("x", 0.5, 1.0, 1.0, 0.0);
  CHECK(ok.pass);
  CHECK(ok.margin == 0.0);
  const CheckRecord bad = make_record("x", 0.5, 2.0, 1.0, 0.5);
  CHECK_FALSE(bad.pass);
  CHECK(bad.margin == -0.5);
  InequalityStats s("x");
  s.add(ok);
  s.add(bad);
  CHECK(s.evaluated == 2);
  CHECK(s.violations == 1);
  CHECK(s.worst_margin == -0.5);
  CHECK(s.worst.lhs == 2.0);
  CHECK(standard_slack(1.0) == doctest::Approx(2e-6 + 1e-12));
}

TEST_CASE("envelope rejects an undersized rate") {
  // y = e^t grows at rate 1 in norm; rate 0.5 cannot bound it
  const Trajectory tr = integrate(validate(make_problem("0", "0", "-1", "0", "exp(t)", 0, 2)));
  const NormTrace trace = norm_trace(tr);
  const EnvelopeResult bad = check_envelope(trace, 0.5, 4);
  CHECK(bad.upper.violations > 0);
  CHECK(bad.failures.size() <= 4);
  CHECK(bad.upper.worst_margin < 0.0);
  const EnvelopeResult good = check_envelope(trace, psi_global(tr));
  CHECK(good.upper.violations == 0);
  CHECK(good.lower.violations == 0);
}
