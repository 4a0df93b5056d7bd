#include "integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdde {

namespace {

std::string fmt_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

constexpr int kBreakingDepth = 3;
constexpr double kRootTolerance = 1e-12;

// Roots of xi - delay(xi) = anchor in (t0, tf], by sign-change scan on the
// integration grid and bisection.
void append_roots(const ValidatedProblem& p, std::span<const double> scan, double anchor,
                  std::vector<double>& out) {
  const auto g = [&](double xi) { return xi - p.delay(xi) - anchor; };
  double prev_t = scan[0];
  double prev_g = g(prev_t);
  for (std::size_t i = 1; i < scan.size(); ++i) {
    const double t = scan[i];
    const double gt = g(t);
    if (gt == 0.0) {
      out.push_back(t);
    } else if (prev_g != 0.0 && (prev_g < 0.0) != (gt < 0.0)) {
      double lo = prev_t;
      double hi = t;
      double glo = prev_g;
      while (hi - lo > kRootTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      out.push_back(std::fabs(g(lo)) <= std::fabs(g(hi)) ? lo : hi);
    }
    prev_t = t;
    prev_g = gt;
  }
}

}  // namespace

double hermite_value(double ta, double tb, double ya, double yb, double da, double db, double t) {
  const double h = tb - ta;
  const double s = (t - ta) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * ya + h10 * h * da + h01 * yb + h11 * h * db;
}

double hermite_slope(double ta, double tb, double ya, double yb, double da, double db, double t) {
  const double h = tb - ta;
  const double s = (t - ta) / h;
  const double s2 = s * s;
  const double d00 = 6.0 * s2 - 6.0 * s;
  const double d10 = 3.0 * s2 - 4.0 * s + 1.0;
  const double d01 = -6.0 * s2 + 6.0 * s;
  const double d11 = 3.0 * s2 - 2.0 * s;
  return (d00 * ya + d01 * yb) / h + d10 * da + d11 * db;
}

std::vector<double> breaking_points(const ValidatedProblem& p) {
  std::vector<double> all{p.t0()};
  if (p.regime() == DelayRegime::Zero) return all;

  const std::vector<double> scan = uniform_grid(p.t0(), p.tf(), p.step());
  std::vector<double> level{p.t0()};
  for (int depth = 0; depth < kBreakingDepth && !level.empty(); ++depth) {
    std::vector<double> next;
    for (double anchor : level) append_roots(p, scan, anchor, next);
    std::sort(next.begin(), next.end());
    std::vector<double> fresh;
    for (double xi : next) {
      if (xi <= p.t0() || xi > p.tf()) continue;
      const bool seen = std::any_of(all.begin(), all.end(),
                                    [&](double b) { return std::fabs(b - xi) <= 1e-10; }) ||
                        std::any_of(fresh.begin(), fresh.end(),
                                    [&](double b) { return std::fabs(b - xi) <= 1e-10; });
      if (!seen) fresh.push_back(xi);
    }
    all.insert(all.end(), fresh.begin(), fresh.end());
    level = std::move(fresh);
  }
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<double> integration_mesh(const ValidatedProblem& p,
                                     std::span<const double> breaking) {
  std::vector<double> cuts(breaking.begin(), breaking.end());
  if (cuts.back() < p.tf()) cuts.push_back(p.tf());
  std::vector<double> mesh{cuts.front()};
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const std::vector<double> seg = uniform_grid(cuts[k], cuts[k + 1], p.step());
    mesh.insert(mesh.end(), seg.begin() + 1, seg.end());
  }
  return mesh;
}

State Trajectory::dense(double t) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(steps_.size()),
                             t);
  std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  i = std::min(i, steps_.size() - 1);
  const StepRecord& s = steps_[i];
  State out;
  for (std::size_t c = 0; c < 3; ++c) {
    out[c] = hermite_value(s.ta, s.tb, s.xa[c], s.xb[c], s.fa[c], s.fb[c], t);
  }
  return out;
}

State Trajectory::delayed_state(double sigma) const {
  if (sigma <= problem_.t0()) {
    const Jet h = problem_.history_state(sigma);
    return {h.y, h.y1, h.y2};
  }
  const double available = steps_.empty() ? problem_.t0() : steps_.back().tb;
  if (steps_.empty() || sigma > available + kTimeSlack) {
    throw DomainError("delayed time " + fmt_time(sigma) + " beyond computed data (" +
                      fmt_time(available) + ")");
  }
  return dense(std::min(sigma, available));
}

double Trajectory::third_derivative(double t, const State& x) const {
  const State d = problem_.regime() == DelayRegime::Zero ? x
                                                          : delayed_state(t - problem_.delay(t));
  return -(problem_.coefficient(1, t) * d[2] + problem_.coefficient(2, t) * d[1] +
           problem_.coefficient(3, t) * d[0]);
}

State Trajectory::lower_state(double t) const {
  if (t < domain_start() - kTimeSlack || t > domain_end() + kTimeSlack) {
    throw DomainError("sample time " + fmt_time(t) + " outside [" + fmt_time(domain_start()) +
                      ", " + fmt_time(domain_end()) + "]");
  }
  if (t < problem_.t0()) {
    const Jet h = problem_.history_state(std::max(t, domain_start()));
    return {h.y, h.y1, h.y2};
  }
  return dense(std::min(t, domain_end()));
}

StateSample Trajectory::sample(double t) const {
  if (t < domain_start() - kTimeSlack || t > domain_end() + kTimeSlack) {
    throw DomainError("sample time " + fmt_time(t) + " outside [" + fmt_time(domain_start()) +
                      ", " + fmt_time(domain_end()) + "]");
  }
  if (t < problem_.t0()) {
    const Jet h = problem_.history_state(std::max(t, domain_start()));
    return {t, h.y, h.y1, h.y2, h.y3};
  }
  const double tc = std::min(t, domain_end());
  const State x = dense(tc);
  return {t, x[0], x[1], x[2], third_derivative(tc, x)};
}

Trajectory integrate(const ValidatedProblem& p) {
  Trajectory tr(p);
  tr.breaking_ = breaking_points(p);
  tr.nodes_ = integration_mesh(p, tr.breaking_);
  tr.steps_.reserve(tr.nodes_.size());

  const auto rhs = [&](double t, const State& x) -> State {
    return {x[1], x[2], tr.third_derivative(t, x)};
  };
  const auto finite = [](const State& s) {
    return std::isfinite(s[0]) && std::isfinite(s[1]) && std::isfinite(s[2]);
  };

  const Jet start = p.history_state(p.t0());
  State x{start.y, start.y1, start.y2};
  State fx = rhs(p.t0(), x);
  State carry{};
  if (!finite(fx)) throw IntegrationError("non-finite derivative at t=" + fmt_time(p.t0()), p.t0());

  for (std::size_t n = 0; n + 1 < tr.nodes_.size(); ++n) {
    const double ta = tr.nodes_[n];
    const double tb = tr.nodes_[n + 1];
    const double h = tb - ta;
    const double tm = ta + 0.5 * h;

    State stage;
    for (std::size_t c = 0; c < 3; ++c) stage[c] = x[c] + 0.5 * h * fx[c];
    const State k2 = rhs(tm, stage);
    for (std::size_t c = 0; c < 3; ++c) stage[c] = x[c] + 0.5 * h * k2[c];
    const State k3 = rhs(tm, stage);
    for (std::size_t c = 0; c < 3; ++c) stage[c] = x[c] + h * k3[c];
    const State k4 = rhs(tb, stage);

    // compensated accumulation keeps roundoff below the truncation error at small h
    State xb;
    for (std::size_t c = 0; c < 3; ++c) {
      const double incr = h / 6.0 * (fx[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]) - carry[c];
      xb[c] = x[c] + incr;
      carry[c] = (xb[c] - x[c]) - incr;
    }
    if (!finite(xb)) throw IntegrationError("non-finite state at t=" + fmt_time(tb), tb);

    StepRecord rec{ta, tb, x, xb, fx, {}};
    // the end derivative only reads delayed data from steps before this one
    State fb = rhs(tb, xb);
    if (!finite(fb)) throw IntegrationError("non-finite derivative at t=" + fmt_time(tb), tb);
    rec.fb = fb;
    tr.steps_.push_back(rec);
    x = xb;
    fx = fb;
  }
  return tr;
}

}  // namespace rdde
