#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "expr.hpp"

namespace rdde {

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Delayed value lookup outside history/solution data, or a sample request
/// outside the trajectory domain.
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// y'''(t) + m1(t) y''(t - delay(t)) + m2(t) y'(t - delay(t)) + m3(t) y(t - delay(t)) = 0
/// on [t0, tf], with y = history on [t0 - max delay, t0].
struct Problem {
  expr::Expression m1;
  expr::Expression m2;
  expr::Expression m3;
  expr::Expression delay;
  expr::Expression history;
  double t0 = 0.0;
  double tf = 1.0;
  double step = 1e-3;
};

enum class DelayRegime { Zero, Retarded };

const char* to_string(DelayRegime regime);

/// Suprema of |m_j| over the interval (not of the signed coefficients).
struct SupCoefficients {
  double m01 = 0.0;
  double m02 = 0.0;
  double m03 = 0.0;
};

/// Values and derivatives of order 0..3 at one time.
struct Jet {
  double y = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  double y3 = 0.0;
};

inline constexpr double kTimeSlack = 1e-12;

/// A problem that passed validate(). Immutable; shareable across threads.
class ValidatedProblem {
public:
  const Problem& problem() const noexcept { return problem_; }
  DelayRegime regime() const noexcept { return regime_; }
  double delay_max() const noexcept { return delay_max_; }
  double t0() const noexcept { return problem_.t0; }
  double tf() const noexcept { return problem_.tf; }
  double step() const noexcept { return problem_.step; }
  /// Lower end of the history span, t0 - delay_max.
  double history_start() const noexcept { return problem_.t0 - delay_max_; }

  const SupCoefficients& sup() const noexcept { return sup_; }

  double coefficient(int j, double t) const { return coefficients_[j - 1].evaluate(t); }
  double delay(double t) const;

  /// History derivatives of order 0..3 at t in [t0 - delay_max, t0].
  Jet history_state(double t) const;

private:
  friend ValidatedProblem validate(const Problem& p);

  Problem problem_;
  DelayRegime regime_ = DelayRegime::Zero;
  double delay_max_ = 0.0;
  SupCoefficients sup_;
  std::array<expr::Expression, 3> coefficients_;
  std::array<expr::Expression, 4> history_jet_;
};

/// Checks interval, step and the delay band; classifies the delay regime and
/// computes the sup coefficients. Throws ValidationError.
ValidatedProblem validate(const Problem& p);

/// sup over [t0, tf] of |m_j| via grid sampling at the integration step and
/// golden-section refinement around the best sample. j in 1..3.
double sup_abs_coefficient(const Problem& p, int j);

/// Integration grid t0, t0 + h, ..., with tf appended.
std::vector<double> uniform_grid(double t0, double tf, double h);

}  // namespace rdde
