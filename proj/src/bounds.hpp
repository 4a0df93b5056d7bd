#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "integrator.hpp"
#include "mvt.hpp"

namespace rdde {

inline constexpr double kEpsRel = 1e-6;
inline constexpr double kEpsAbs = 1e-12;

/// sqrt(y^2 + y1^2 + y2^2). Throws std::invalid_argument on non-finite input.
double norm_state(double y, double y1, double y2);

/// Samples, norm, energy u = norm^2 and its analytic derivative on the
/// trajectory's step boundaries.
struct NormTrace {
  std::vector<StateSample> samples;
  std::vector<double> norm;
  std::vector<double> u;
  std::vector<double> du;

  std::size_t size() const noexcept { return samples.size(); }
};

NormTrace norm_trace(const Trajectory& tr);

/// 1 + m01 (1 + |w'''(t_k2)|) + m02 (1 + |w''(t_k1)|) + m03 (1 + |w'(t_k0)|)
double psi_from_magnitudes(const SupCoefficients& sup, const std::array<double, 3>& magnitudes);

/// Zero-delay convention: 1 + m01 + m02 + m03.
double psi_zero_delay(const SupCoefficients& sup);

double psi_pointwise(const Trajectory& tr, double t_k);

/// Uniform rate 1 + m01 (1 + sup|w'''|) + m02 (1 + sup|w''|) + m03 (1 + sup|w'|),
/// sups over the history and solution grids and over every supplied
/// mean-value magnitude, so it dominates each pointwise value built from them.
double psi_global(const Trajectory& tr, std::span<const MvtPoints> mvts = {});

struct PsiSummary {
  SupCoefficients sup;
  std::vector<double> pointwise;
  double global = 1.0;
};

struct CheckRecord {
  std::string name;
  double t = 0.0;
  /// second time of a pair check (the anchor s of the envelope); NaN otherwise
  double s = std::numeric_limits<double>::quiet_NaN();
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  /// rhs + slack - lhs; the check passes iff margin >= 0
  double margin = 0.0;
  bool pass = true;
};

CheckRecord make_record(std::string name, double t, double lhs, double rhs, double slack);

/// Standard slack eps_rel (1 + rhs) + eps_abs.
inline double standard_slack(double rhs) { return kEpsRel * (1.0 + rhs) + kEpsAbs; }

/// |w^(i)(t_k - delay)| <= |w^(i)(t_k)| + |w^(i+1)(t_ki)| for i = 0, 1, 2.
std::array<CheckRecord, 3> check_delay_bounds(const Trajectory& tr, double t_k,
                                              const MvtPoints& mv);

/// |w'''(t_k)| <= m01 (|w''| + |w'''(t_k2)|) + m02 (|w'| + |w''(t_k1)|) + m03 (|w| + |w'(t_k0)|)
CheckRecord check_derivative_bound(const Trajectory& tr, double t_k, const MvtPoints& mv,
                                   const SupCoefficients& sup);

/// |u'| <= 2 (|w||w'| + |w'||w''| + |w''||w'''|), slack 1e-12 (1 + rhs).
CheckRecord check_energy_rate(const NormTrace& trace, std::size_t k);

/// |u'(t_k)| <= 2 psi(t_k) u(t_k).
CheckRecord check_differential_inequality(const NormTrace& trace, const PsiSummary& psi,
                                          std::size_t k);

/// Aggregate of one named inequality over all its evaluations.
struct InequalityStats {
  InequalityStats(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  CheckRecord worst;

  void add(const CheckRecord& r);
};

struct EnvelopeResult {
  InequalityStats upper{"envelope_upper"};
  InequalityStats lower{"envelope_lower"};
  std::vector<CheckRecord> failures;  // first few, capped
};

/// Two-sided exponential envelope over every ordered grid pair (s, t):
///   |w(s)| e^{-psi*|t-s|} - slack <= |w(t)| <= |w(s)| e^{psi*|t-s|} + slack,
/// slack = eps_rel |w(s)| e^{psi*|t-s|} + eps_abs. Pairs with |w(s)| = 0 only
/// require |w(t)| <= slack.
EnvelopeResult check_envelope(const NormTrace& trace, double psi_star,
                              std::size_t max_failures = 32);

}  // namespace rdde
