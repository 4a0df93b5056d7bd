#include "mvt.hpp"

#include <cmath>
#include <string>

namespace rdde {

namespace {

constexpr double kBracket = 1e-12;
// a collapsed bracket whose ends both miss the slope by more than this is a jump
constexpr double kJumpResidual = 1e-8;

double derivative_of_order(const Trajectory& tr, std::size_t order, double s) {
  if (order == 3) return tr.sample(s).y3;
  return tr.lower_state(s)[order];
}

}  // namespace

MvtPoints locate_mvt_points(const Trajectory& tr, double t_k) {
  const ValidatedProblem& p = tr.problem();
  if (t_k < p.t0() - kTimeSlack || t_k > p.tf() + kTimeSlack) {
    throw DomainError("base time " + std::to_string(t_k) + " outside the solution interval");
  }
  const double delay = p.delay(t_k);
  if (!(delay > 0.0)) {
    throw DomainError("mean-value points need delay(t_k) > 0; got " + std::to_string(delay));
  }
  double a = t_k - delay;
  if (a < tr.domain_start() - kTimeSlack) {
    throw DomainError("window start " + std::to_string(a) + " below the history span");
  }
  a = std::max(a, tr.domain_start());

  MvtPoints out;
  out.t_k = t_k;
  out.delay = delay;

  const State at_k = tr.lower_state(t_k);
  const State at_a = tr.lower_state(a);
  for (std::size_t i = 0; i < 3; ++i) out.slopes[i] = (at_k[i] - at_a[i]) / delay;

  // one scan serves all three orders
  std::array<double, kMvtScanSamples> s{};
  std::array<std::array<double, kMvtScanSamples>, 3> g{};
  for (int j = 0; j < kMvtScanSamples; ++j) {
    const double sj = j == kMvtScanSamples - 1
                          ? t_k
                          : a + (t_k - a) * static_cast<double>(j) / (kMvtScanSamples - 1);
    s[j] = sj;
    const StateSample w = tr.sample(sj);
    g[0][j] = w.y1 - out.slopes[0];
    g[1][j] = w.y2 - out.slopes[1];
    g[2][j] = w.y3 - out.slopes[2];
  }

  for (std::size_t i = 0; i < 3; ++i) {
    const auto gi = [&](double x) { return derivative_of_order(tr, i + 1, x) - out.slopes[i]; };
    const auto& gs = g[i];
    int hit = -1;
    bool exact = false;
    for (int j = 0; j < kMvtScanSamples; ++j) {
      if (gs[j] == 0.0) {
        hit = j;
        exact = true;
        break;
      }
      if (j + 1 < kMvtScanSamples && gs[j + 1] != 0.0 && (gs[j] < 0.0) != (gs[j + 1] < 0.0)) {
        hit = j;
        break;
      }
    }

    double point;
    double residual;
    if (hit >= 0 && exact) {
      point = s[hit];
      residual = 0.0;
      out.bracketed[i] = true;
    } else if (hit >= 0) {
      double lo = s[hit];
      double hi = s[hit + 1];
      double glo = gs[hit];
      double ghi = gs[hit + 1];
      while (hi - lo > kBracket) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = gi(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          glo = ghi = 0.0;
          break;
        }
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
          ghi = gm;
        }
      }
      out.bracketed[i] = true;
      const double tol = kJumpResidual * (1.0 + std::fabs(out.slopes[i]));
      if (std::fabs(glo) > tol && std::fabs(ghi) > tol) {
        // slope lies strictly between the one-sided values across the jump
        point = lo;
        residual = 0.0;
        out.generalized[i] = true;
      } else if (std::fabs(glo) <= std::fabs(ghi)) {
        point = lo;
        residual = glo;
      } else {
        point = hi;
        residual = ghi;
      }
    } else {
      int best = 0;
      for (int j = 1; j < kMvtScanSamples; ++j) {
        if (std::fabs(gs[j]) < std::fabs(gs[best])) best = j;
      }
      point = s[best];
      residual = gs[best];
      out.bracketed[i] = false;
    }
    const double value = residual + out.slopes[i];
    out.points[i] = point;
    out.residuals[i] = residual;
    out.magnitudes[i] = std::fabs(value);
  }
  return out;
}

}  // namespace rdde
