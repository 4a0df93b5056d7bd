#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "model.hpp"

namespace rdde {

/// Non-finite state during integration (blow-up).
class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
  double time() const noexcept { return time_; }

private:
  double time_;
};

/// w, w', w'', w''' at one time.
struct StateSample {
  double t = 0.0;
  double y = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  double y3 = 0.0;
};

using State = std::array<double, 3>;

/// One completed step: endpoint states (y, y', y'') and their time
/// derivatives (y', y'', y'''), enough for a cubic Hermite per component.
struct StepRecord {
  double ta = 0.0;
  double tb = 0.0;
  State xa{};
  State xb{};
  State fa{};
  State fb{};
};

/// Times in (t0, tf] where t - delay(t) hits an earlier breaking point,
/// propagated three levels deep, plus t0 itself. {t0} in the zero regime.
std::vector<double> breaking_points(const ValidatedProblem& p);

/// Step boundaries: a uniform h-grid restarted at every breaking point and
/// closed at tf.
std::vector<double> integration_mesh(const ValidatedProblem& p,
                                     std::span<const double> breaking);

class Trajectory {
public:
  const ValidatedProblem& problem() const noexcept { return problem_; }

  /// Step boundaries t0 = nodes()[0] < ... < nodes().back() = tf.
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> breaking() const noexcept { return breaking_; }
  std::span<const StepRecord> steps() const noexcept { return steps_; }

  double domain_start() const noexcept { return problem_.history_start(); }
  double domain_end() const noexcept { return problem_.tf(); }

  /// Full state at t in [t0 - delay_max, tf]. For t >= t0, y''' is computed
  /// from the equation using delayed dense values.
  StateSample sample(double t) const;

  /// (y, y', y'') at t; history for t < t0, dense output otherwise.
  State lower_state(double t) const;

  /// Right-hand side y''' at time t given the current lower state x.
  double third_derivative(double t, const State& x) const;

private:
  friend Trajectory integrate(const ValidatedProblem& p);
  explicit Trajectory(const ValidatedProblem& p) : problem_(p) {}

  State dense(double t) const;
  State delayed_state(double sigma) const;

  ValidatedProblem problem_;
  std::vector<double> breaking_;
  std::vector<double> nodes_;
  std::vector<StepRecord> steps_;
};

/// Method of steps with classical RK4 on x = (y, y', y''). Throws
/// IntegrationError on blow-up.
Trajectory integrate(const ValidatedProblem& p);

/// Cubic Hermite value and derivative on [ta, tb].
double hermite_value(double ta, double tb, double ya, double yb, double da, double db, double t);
double hermite_slope(double ta, double tb, double ya, double yb, double da, double db, double t);

}  // namespace rdde
