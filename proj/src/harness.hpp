#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "config.hpp"

namespace rdde {

/// Everything derived from one integration: trajectory, norms, mean-value
/// points and rates.
struct Analysis {
  Trajectory trajectory;
  NormTrace trace;
  /// one entry per grid node; empty in the zero-delay regime
  std::vector<MvtPoints> mvts;
  PsiSummary psi;
};

/// Integrates and computes the trace, mean-value points at every node with
/// positive delay, pointwise rates and the dominating rate.
Analysis analyze(const ValidatedProblem& p);

struct VerificationOptions {
  std::optional<double> psi_override;
  double blowup_threshold = 1e12;
  std::size_t max_failure_records = 64;
};

struct VerificationReport {
  bool pass = false;
  /// integration blew up or the norm exceeded the blow-up threshold; no
  /// inequality was judged
  bool discarded = false;
  std::string discard_reason;
  DelayRegime regime = DelayRegime::Zero;
  SupCoefficients sup;
  double psi_star = std::numeric_limits<double>::quiet_NaN();
  bool psi_overridden = false;
  double psi_max_pointwise = std::numeric_limits<double>::quiet_NaN();
  double max_norm = 0.0;
  std::size_t grid_points = 0;
  std::size_t breaking_points = 0;
  std::size_t mvt_unbracketed = 0;
  std::size_t mvt_generalized = 0;
  double mvt_max_residual = 0.0;
  std::vector<InequalityStats> inequalities;
  std::vector<CheckRecord> failures;

  std::size_t violations() const;
};

VerificationReport run_verification(const ValidatedProblem& p, const VerificationOptions& opts = {});

/// Randomised admissible scenario; a pure function of the seed.
struct ScenarioSpec {
  std::uint64_t seed = 0;
  Config config;
  Problem problem;
  bool zero_delay = false;
  double amplitude_bound = 2.0;
  double delay_lo = 0.0;
  double delay_hi = 0.0;
  int history_degree = 3;
  double horizon = 0.0;
};

ScenarioSpec generate_scenario(std::uint64_t seed);

struct SweepEntry {
  std::uint64_t seed = 0;
  bool pass = false;
  bool discarded = false;
  std::string discard_reason;
  double psi_star = 0.0;
  std::size_t violations = 0;
  std::vector<std::pair<std::string, double>> worst_margins;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  std::size_t violations = 0;
  std::size_t discarded = 0;
  bool pass() const noexcept { return violations == 0; }
};

/// Runs seeds [seed, seed + count); entries are ordered by seed regardless of
/// the number of worker threads.
SweepResult sweep(std::uint64_t seed, std::uint64_t count, unsigned threads = 0);

struct ConvergenceResult {
  std::vector<double> steps;
  std::vector<double> errors;
  /// log(e_i / e_{i+1}) / log(h_i / h_{i+1}) for consecutive runs
  std::vector<double> orders;
};

/// Max |y - reference| over each run's grid. Without an exact reference the
/// run with the smallest step serves as reference (and gets no error entry).
ConvergenceResult convergence_study(const Problem& p, const std::vector<double>& steps,
                                    const std::function<double(double)>& exact = {});

}  // namespace rdde
