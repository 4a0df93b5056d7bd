#include "harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <random>
#include <thread>

namespace rdde {

namespace {

std::string number_text(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  std::string s(buf.data(), ptr);
  return v < 0.0 ? "(" + s + ")" : s;
}

// mt19937_64 output is fully specified; the mapping to [a, b) is done here so
// scenarios do not depend on the standard library's distributions.
class Uniform {
public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()(double a, double b) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace

std::size_t VerificationReport::violations() const {
  std::size_t n = 0;
  for (const auto& s : inequalities) n += s.violations;
  return n;
}

Analysis analyze(const ValidatedProblem& p) {
  Analysis a{integrate(p), {}, {}, {}};
  a.trace = norm_trace(a.trajectory);
  a.psi.sup = p.sup();
  const auto nodes = a.trajectory.nodes();
  a.psi.pointwise.resize(nodes.size());
  if (p.regime() == DelayRegime::Retarded) {
    a.mvts.reserve(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      a.mvts.push_back(locate_mvt_points(a.trajectory, nodes[k]));
      a.psi.pointwise[k] = psi_from_magnitudes(p.sup(), a.mvts.back().magnitudes);
    }
  } else {
    std::fill(a.psi.pointwise.begin(), a.psi.pointwise.end(), psi_zero_delay(p.sup()));
  }
  a.psi.global = psi_global(a.trajectory, a.mvts);
  return a;
}

VerificationReport run_verification(const ValidatedProblem& p, const VerificationOptions& opts) {
  VerificationReport report;
  report.regime = p.regime();
  report.sup = p.sup();

  std::optional<Analysis> analysis;
  try {
    analysis.emplace(analyze(p));
  } catch (const IntegrationError& e) {
    report.discarded = true;
    report.discard_reason = e.what();
    return report;
  }
  const Analysis& a = *analysis;
  const Trajectory& tr = a.trajectory;

  report.grid_points = a.trace.size();
  report.breaking_points = tr.breaking().size();
  report.max_norm = *std::max_element(a.trace.norm.begin(), a.trace.norm.end());
  report.psi_star = a.psi.global;
  report.psi_max_pointwise = *std::max_element(a.psi.pointwise.begin(), a.psi.pointwise.end());
  if (report.max_norm > opts.blowup_threshold) {
    report.discarded = true;
    report.discard_reason = "norm exceeds blow-up threshold";
    return report;
  }

  InequalityStats delayed[3] = {{"delayed_value_bound_0"}, {"delayed_value_bound_1"},
                                {"delayed_value_bound_2"}};
  InequalityStats third{"third_derivative_bound"};
  InequalityStats triangle{"energy_rate_triangle"};
  InequalityStats differential{"energy_differential"};

  const auto keep = [&](const CheckRecord& r) {
    if (!r.pass && report.failures.size() < opts.max_failure_records) report.failures.push_back(r);
  };

  const auto nodes = tr.nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!a.mvts.empty()) {
      const MvtPoints& mv = a.mvts[k];
      for (std::size_t i = 0; i < 3; ++i) {
        if (!mv.bracketed[i]) ++report.mvt_unbracketed;
        if (mv.generalized[i]) ++report.mvt_generalized;
        report.mvt_max_residual = std::max(report.mvt_max_residual, std::fabs(mv.residuals[i]));
      }
      const auto d = check_delay_bounds(tr, nodes[k], mv);
      for (std::size_t i = 0; i < 3; ++i) {
        delayed[i].add(d[i]);
        keep(d[i]);
      }
      const CheckRecord r = check_derivative_bound(tr, nodes[k], mv, p.sup());
      third.add(r);
      keep(r);
    }
    const CheckRecord tri = check_energy_rate(a.trace, k);
    triangle.add(tri);
    keep(tri);
    const CheckRecord diff = check_differential_inequality(a.trace, a.psi, k);
    differential.add(diff);
    keep(diff);
  }

  double psi_star = a.psi.global;
  if (opts.psi_override) {
    psi_star = *opts.psi_override;
    report.psi_star = psi_star;
    report.psi_overridden = true;
  }
  EnvelopeResult env = check_envelope(a.trace, psi_star, opts.max_failure_records);
  for (const CheckRecord& r : env.failures) keep(r);

  if (!a.mvts.empty()) {
    for (auto& s : delayed) report.inequalities.push_back(s);
    report.inequalities.push_back(third);
  }
  report.inequalities.push_back(triangle);
  report.inequalities.push_back(differential);
  report.inequalities.push_back(env.upper);
  report.inequalities.push_back(env.lower);
  report.pass = report.violations() == 0;
  return report;
}

ScenarioSpec generate_scenario(std::uint64_t seed) {
  constexpr double kStep = 1e-3;
  Uniform u(seed);
  ScenarioSpec s;
  s.seed = seed;

  std::array<std::string, 3> m;
  for (auto& text : m) {
    const double a = u(-2.0, 2.0);
    const double b = u(-1.0, 1.0) * (2.0 - std::fabs(a));
    const double c = u(0.5, 3.0);
    text = number_text(a) + "+" + number_text(b) + "*sin(" + number_text(c) + "*t)";
  }

  s.zero_delay = u(0.0, 1.0) < 0.2;
  std::string delay = "0";
  if (!s.zero_delay) {
    // band [lo, hi] keeps a margin above 2h and below 1 for rounding in sin()
    s.delay_lo = u(4.0 * kStep, 0.999);
    s.delay_hi = u(s.delay_lo, 0.999);
    const double d0 = 0.5 * (s.delay_lo + s.delay_hi);
    const double d1 = 0.5 * (s.delay_hi - s.delay_lo) * (u(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    const double d2 = u(0.5, 3.0);
    delay = number_text(d0) + "+" + number_text(d1) + "*sin(" + number_text(d2) + "*t)";
  }

  std::array<double, 4> c{};
  for (double& ci : c) ci = u(-1.0, 1.0);
  const std::string history = number_text(c[0]) + "+" + number_text(c[1]) + "*t+" +
                              number_text(c[2]) + "*t^2+" + number_text(c[3]) + "*t^3";

  s.horizon = u(2.0, 5.0);
  s.config = Config{m[0], m[1], m[2], delay, history, 0.0, s.horizon, kStep};
  s.problem = to_problem(s.config);
  return s;
}

SweepResult sweep(std::uint64_t seed, std::uint64_t count, unsigned threads) {
  SweepResult result;
  result.entries.resize(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));

  std::atomic<std::uint64_t> next{0};
  const auto work = [&] {
    for (std::uint64_t i = next++; i < count; i = next++) {
      SweepEntry& e = result.entries[i];
      e.seed = seed + i;
      VerificationReport r;
      try {
        r = run_verification(validate(generate_scenario(seed + i).problem));
      } catch (const std::exception& err) {
        // a generated scenario must always validate and integrate
        e.discard_reason = std::string("error: ") + err.what();
        e.violations = 1;
        continue;
      }
      e.pass = r.pass;
      e.discarded = r.discarded;
      e.discard_reason = r.discard_reason;
      e.psi_star = r.psi_star;
      e.violations = r.violations();
      for (const auto& s : r.inequalities) e.worst_margins.emplace_back(s.name, s.worst_margin);
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  for (const SweepEntry& e : result.entries) {
    result.violations += e.violations;
    if (e.discarded) ++result.discarded;
  }
  return result;
}

ConvergenceResult convergence_study(const Problem& p, const std::vector<double>& steps,
                                    const std::function<double(double)>& exact) {
  ConvergenceResult out;
  std::vector<Trajectory> runs;
  for (double h : steps) {
    Problem q = p;
    q.step = h;
    runs.push_back(integrate(validate(q)));
  }

  std::size_t reference = runs.size();
  if (!exact) {
    reference = static_cast<std::size_t>(
        std::min_element(steps.begin(), steps.end()) - steps.begin());
  }
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (r == reference) continue;
    double err = 0.0;
    for (double t : runs[r].nodes()) {
      const double y = runs[r].lower_state(t)[0];
      const double ref = exact ? exact(t) : runs[reference].lower_state(t)[0];
      err = std::max(err, std::fabs(y - ref));
    }
    out.steps.push_back(steps[r]);
    out.errors.push_back(err);
  }
  for (std::size_t i = 0; i + 1 < out.errors.size(); ++i) {
    out.orders.push_back(std::log(out.errors[i] / out.errors[i + 1]) /
                         std::log(out.steps[i] / out.steps[i + 1]));
  }
  return out;
}

}  // namespace rdde
