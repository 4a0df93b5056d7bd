#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdde {

double norm_state(double y, double y1, double y2) {
  if (!std::isfinite(y) || !std::isfinite(y1) || !std::isfinite(y2)) {
    throw std::invalid_argument("norm_state: non-finite component");
  }
  return std::sqrt(y * y + y1 * y1 + y2 * y2);
}

NormTrace norm_trace(const Trajectory& tr) {
  NormTrace trace;
  const auto nodes = tr.nodes();
  trace.samples.reserve(nodes.size());
  trace.norm.reserve(nodes.size());
  trace.u.reserve(nodes.size());
  trace.du.reserve(nodes.size());
  for (double t : nodes) {
    const StateSample w = tr.sample(t);
    const double n = norm_state(w.y, w.y1, w.y2);
    trace.samples.push_back(w);
    trace.norm.push_back(n);
    trace.u.push_back(w.y * w.y + w.y1 * w.y1 + w.y2 * w.y2);
    trace.du.push_back(2.0 * (w.y * w.y1 + w.y1 * w.y2 + w.y2 * w.y3));
  }
  return trace;
}

double psi_from_magnitudes(const SupCoefficients& sup, const std::array<double, 3>& magnitudes) {
  return 1.0 + sup.m01 * (1.0 + magnitudes[2]) + sup.m02 * (1.0 + magnitudes[1]) +
         sup.m03 * (1.0 + magnitudes[0]);
}

double psi_zero_delay(const SupCoefficients& sup) { return 1.0 + sup.m01 + sup.m02 + sup.m03; }

double psi_pointwise(const Trajectory& tr, double t_k) {
  const ValidatedProblem& p = tr.problem();
  if (p.regime() == DelayRegime::Zero || p.delay(t_k) == 0.0) return psi_zero_delay(p.sup());
  return psi_from_magnitudes(p.sup(), locate_mvt_points(tr, t_k).magnitudes);
}

double psi_global(const Trajectory& tr, std::span<const MvtPoints> mvts) {
  const ValidatedProblem& p = tr.problem();
  std::array<double, 3> sup{};  // |w'|, |w''|, |w'''|
  const auto absorb = [&](const StateSample& w) {
    sup[0] = std::max(sup[0], std::fabs(w.y1));
    sup[1] = std::max(sup[1], std::fabs(w.y2));
    sup[2] = std::max(sup[2], std::fabs(w.y3));
  };
  if (p.delay_max() > 0.0) {
    for (double t : uniform_grid(p.history_start(), p.t0(), p.step())) {
      if (t < p.t0()) absorb(tr.sample(t));
    }
  }
  for (double t : tr.nodes()) absorb(tr.sample(t));
  for (const MvtPoints& mv : mvts) {
    for (std::size_t i = 0; i < 3; ++i) sup[i] = std::max(sup[i], mv.magnitudes[i]);
  }
  return psi_from_magnitudes(p.sup(), sup);
}

CheckRecord make_record(std::string name, double t, double lhs, double rhs, double slack) {
  CheckRecord r;
  r.name = std::move(name);
  r.t = t;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = slack;
  r.margin = rhs + slack - lhs;
  r.pass = r.margin >= 0.0;
  return r;
}

std::array<CheckRecord, 3> check_delay_bounds(const Trajectory& tr, double t_k,
                                              const MvtPoints& mv) {
  const State now = tr.lower_state(t_k);
  const double back = std::max(t_k - mv.delay, tr.domain_start());
  const State then = tr.lower_state(back);
  std::array<CheckRecord, 3> out;
  static constexpr std::array<const char*, 3> names{"delayed_value_bound_0", "delayed_value_bound_1",
                                                    "delayed_value_bound_2"};
  for (std::size_t i = 0; i < 3; ++i) {
    const double lhs = std::fabs(then[i]);
    const double rhs = std::fabs(now[i]) + mv.magnitudes[i];
    out[i] = make_record(names[i], t_k, lhs, rhs, standard_slack(rhs));
  }
  return out;
}

CheckRecord check_derivative_bound(const Trajectory& tr, double t_k, const MvtPoints& mv,
                                   const SupCoefficients& sup) {
  const StateSample w = tr.sample(t_k);
  const double lhs = std::fabs(w.y3);
  const double rhs = sup.m01 * (std::fabs(w.y2) + mv.magnitudes[2]) +
                     sup.m02 * (std::fabs(w.y1) + mv.magnitudes[1]) +
                     sup.m03 * (std::fabs(w.y) + mv.magnitudes[0]);
  return make_record("third_derivative_bound", t_k, lhs, rhs, standard_slack(rhs));
}

CheckRecord check_energy_rate(const NormTrace& trace, std::size_t k) {
  const StateSample& w = trace.samples[k];
  const double rhs = 2.0 * (std::fabs(w.y) * std::fabs(w.y1) + std::fabs(w.y1) * std::fabs(w.y2) +
                            std::fabs(w.y2) * std::fabs(w.y3));
  return make_record("energy_rate_triangle", w.t, std::fabs(trace.du[k]), rhs, 1e-12 * (1.0 + rhs));
}

CheckRecord check_differential_inequality(const NormTrace& trace, const PsiSummary& psi,
                                          std::size_t k) {
  const double rhs = 2.0 * psi.pointwise[k] * trace.u[k];
  return make_record("energy_differential", trace.samples[k].t, std::fabs(trace.du[k]), rhs,
                     standard_slack(rhs));
}

void InequalityStats::add(const CheckRecord& r) {
  ++evaluated;
  if (!r.pass) ++violations;
  if (r.margin < worst_margin) {
    worst_margin = r.margin;
    worst = r;
  }
}

EnvelopeResult check_envelope(const NormTrace& trace, double psi_star, std::size_t max_failures) {
  EnvelopeResult out;
  const std::size_t n = trace.size();
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) times[i] = trace.samples[i].t;

  // only the worst pair of each anchor row is materialised as a record
  for (std::size_t i = 0; i < n; ++i) {
    const double ns = trace.norm[i];
    const double ts = times[i];
    double worst_up = std::numeric_limits<double>::infinity();
    double worst_lo = std::numeric_limits<double>::infinity();
    std::size_t worst_up_j = 0;
    std::size_t worst_lo_j = 0;
    std::size_t up_fail = 0;
    std::size_t lo_fail = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double nt = trace.norm[j];
      if (ns == 0.0) {
        const double m = kEpsAbs - nt;
        if (m < 0.0) ++up_fail;
        if (m < worst_up) {
          worst_up = m;
          worst_up_j = j;
        }
        continue;
      }
      const double grow = std::exp(psi_star * std::fabs(times[j] - ts));
      const double upper = ns * grow;
      const double slack = kEpsRel * upper + kEpsAbs;
      const double mu = upper + slack - nt;
      const double ml = nt + slack - ns / grow;
      if (mu < 0.0) ++up_fail;
      if (ml < 0.0) ++lo_fail;
      if (mu < worst_up) {
        worst_up = mu;
        worst_up_j = j;
      }
      if (ml < worst_lo) {
        worst_lo = ml;
        worst_lo_j = j;
      }
    }

    const auto record = [&](bool upper_side, std::size_t j) {
      const double nt = trace.norm[j];
      CheckRecord r;
      if (ns == 0.0) {
        r = make_record("envelope_upper", times[j], nt, 0.0, kEpsAbs);
      } else {
        const double grow = std::exp(psi_star * std::fabs(times[j] - ts));
        const double upper = ns * grow;
        const double slack = kEpsRel * upper + kEpsAbs;
        r = upper_side ? make_record("envelope_upper", times[j], nt, upper, slack)
                       : make_record("envelope_lower", times[j], ns / grow, nt, slack);
      }
      r.s = ts;
      return r;
    };

    out.upper.evaluated += n;
    out.upper.violations += up_fail;
    if (worst_up < out.upper.worst_margin) {
      out.upper.worst_margin = worst_up;
      out.upper.worst = record(true, worst_up_j);
    }
    if (up_fail > 0 && out.failures.size() < max_failures) {
      out.failures.push_back(record(true, worst_up_j));
    }
    if (ns != 0.0) {
      out.lower.evaluated += n;
      out.lower.violations += lo_fail;
      if (worst_lo < out.lower.worst_margin) {
        out.lower.worst_margin = worst_lo;
        out.lower.worst = record(false, worst_lo_j);
      }
      if (lo_fail > 0 && out.failures.size() < max_failures) {
        out.failures.push_back(record(false, worst_lo_j));
      }
    }
  }
  return out;
}

}  // namespace rdde
