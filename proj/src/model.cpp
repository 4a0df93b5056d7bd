#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdde {

const char* to_string(DelayRegime regime) {
  return regime == DelayRegime::Zero ? "zero" : "retarded";
}

std::vector<double> uniform_grid(double t0, double tf, double h) {
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((tf - t0) / h)) + 1;
  grid.reserve(n + 1);
  for (std::size_t i = 0;; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    // a remnant shorter than 1e-6 h is absorbed into the last step
    if (t >= tf - 1e-6 * h) break;
    grid.push_back(t);
  }
  grid.push_back(tf);
  return grid;
}

namespace {

std::string at_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

double checked_eval(const expr::Expression& e, double t, const char* what) {
  try {
    return e.evaluate(t);
  } catch (const expr::EvaluationError& err) {
    throw ValidationError(std::string(what) + ": " + err.what());
  }
}

const expr::Expression& coefficient_of(const Problem& p, int j) {
  switch (j) {
    case 1:
      return p.m1;
    case 2:
      return p.m2;
    case 3:
      return p.m3;
    default:
      throw std::invalid_argument("coefficient index must be 1..3");
  }
}

}  // namespace

double sup_abs_coefficient(const Problem& p, int j) {
  const expr::Expression& m = coefficient_of(p, j);
  const char* name = j == 1 ? "m1" : j == 2 ? "m2" : "m3";
  const auto f = [&](double t) { return std::fabs(checked_eval(m, t, name)); };

  if (m.is_constant()) return f(p.t0);

  const std::vector<double> grid = uniform_grid(p.t0, p.tf, p.step);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  // golden-section maximisation on the bracket around the best sample
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 200 && (b - a) > 1e-14 * (1.0 + std::fabs(a)); ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::max({best_value, fc, fd, f(0.5 * (a + b))});
}

double ValidatedProblem::delay(double t) const {
  if (regime_ == DelayRegime::Zero) return 0.0;
  return problem_.delay.evaluate(t);
}

Jet ValidatedProblem::history_state(double t) const {
  if (t < history_start() - kTimeSlack || t > t0() + kTimeSlack) {
    throw DomainError("history requested at t=" + at_time(t) + " outside [" +
                      at_time(history_start()) + ", " + at_time(t0()) + "]");
  }
  return {history_jet_[0].evaluate(t), history_jet_[1].evaluate(t), history_jet_[2].evaluate(t),
          history_jet_[3].evaluate(t)};
}

ValidatedProblem validate(const Problem& p) {
  if (!std::isfinite(p.t0) || !std::isfinite(p.tf) || !std::isfinite(p.step)) {
    throw ValidationError("t0, tf and step must be finite");
  }
  if (!(p.t0 < p.tf)) throw ValidationError("degenerate interval: t0 must be < tf");
  if (!(p.step > 0.0)) throw ValidationError("step must be > 0");
  if (p.step > (p.tf - p.t0) / 10.0) {
    throw ValidationError("step must be <= (tf - t0)/10");
  }

  ValidatedProblem v;
  v.problem_ = p;

  std::vector<double> samples = uniform_grid(p.t0, p.tf, p.step / 10.0);
  const std::vector<double> grid = uniform_grid(p.t0, p.tf, p.step);
  samples.insert(samples.end(), grid.begin(), grid.end());
  std::sort(samples.begin(), samples.end());

  bool any_zero = false;
  bool any_short = false;
  double short_at = 0.0;
  double delay_max = 0.0;
  for (double t : samples) {
    const double d = checked_eval(p.delay, t, "delay");
    if (d < 0.0 || d > 1.0) {
      throw ValidationError("delay(" + at_time(t) + ") = " + at_time(d) + " outside [0, 1]");
    }
    if (d == 0.0) {
      any_zero = true;
    } else if (d < 2.0 * p.step && !any_short) {
      any_short = true;
      short_at = t;
    }
    delay_max = std::max(delay_max, d);
  }
  if (any_zero && delay_max > 0.0) {
    throw ValidationError("mixed delay regime: delay vanishes on part of the interval only");
  }
  if (any_short) {
    throw ValidationError("delay(" + at_time(short_at) +
                          ") is positive but below 2*step; vanishing delays are not supported");
  }
  v.regime_ = delay_max == 0.0 ? DelayRegime::Zero : DelayRegime::Retarded;
  v.delay_max_ = delay_max;

  v.coefficients_ = {p.m1, p.m2, p.m3};
  v.sup_ = {sup_abs_coefficient(p, 1), sup_abs_coefficient(p, 2), sup_abs_coefficient(p, 3)};

  v.history_jet_[0] = p.history;
  for (std::size_t k = 1; k < v.history_jet_.size(); ++k) {
    v.history_jet_[k] = expr::differentiate(v.history_jet_[k - 1]);
  }
  // the splice at t0 and every history lookup must be evaluable
  for (double t : {v.history_start(), 0.5 * (v.history_start() + p.t0), p.t0}) {
    for (const auto& e : v.history_jet_) checked_eval(e, t, "history");
  }
  return v;
}

}  // namespace rdde
