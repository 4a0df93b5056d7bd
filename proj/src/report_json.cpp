#include "report_json.hpp"

#include <cmath>

#include <json.hpp>

namespace rdde {

namespace {

using nlohmann::ordered_json;

// JSON has no infinities; they only occur as "no evaluation" sentinels
ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json record_json(const CheckRecord& r) {
  ordered_json j;
  j["name"] = r.name;
  j["t"] = number(r.t);
  if (!std::isnan(r.s)) j["s"] = number(r.s);
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["slack"] = number(r.slack);
  j["margin"] = number(r.margin);
  j["pass"] = r.pass;
  return j;
}

ordered_json worst_margins(const std::vector<std::pair<std::string, double>>& margins) {
  ordered_json j = ordered_json::object();
  for (const auto& [name, m] : margins) j[name] = number(m);
  return j;
}

}  // namespace

std::string to_json(const VerificationReport& r) {
  ordered_json j;
  j["pass"] = r.pass;
  j["discarded"] = r.discarded;
  if (r.discarded) j["discard_reason"] = r.discard_reason;
  j["regime"] = to_string(r.regime);
  j["sup_coefficients"] = {r.sup.m01, r.sup.m02, r.sup.m03};
  j["psi_star"] = number(r.psi_star);
  j["psi_overridden"] = r.psi_overridden;
  j["psi_max_pointwise"] = number(r.psi_max_pointwise);
  j["max_norm"] = number(r.max_norm);
  j["grid_points"] = r.grid_points;
  j["breaking_points"] = r.breaking_points;
  j["mvt_unbracketed"] = r.mvt_unbracketed;
  j["mvt_generalized"] = r.mvt_generalized;
  j["mvt_max_residual"] = number(r.mvt_max_residual);
  j["violations"] = r.violations();

  ordered_json checks = ordered_json::array();
  std::vector<std::pair<std::string, double>> margins;
  for (const auto& s : r.inequalities) {
    ordered_json c;
    c["name"] = s.name;
    c["evaluated"] = s.evaluated;
    c["violations"] = s.violations;
    c["worst_margin"] = number(s.worst_margin);
    if (s.evaluated > 0) c["worst"] = record_json(s.worst);
    checks.push_back(std::move(c));
    margins.emplace_back(s.name, s.worst_margin);
  }
  j["worst_margins"] = worst_margins(margins);
  j["checks"] = std::move(checks);

  ordered_json failures = ordered_json::array();
  for (const auto& f : r.failures) failures.push_back(record_json(f));
  j["failures"] = std::move(failures);
  return j.dump(2);
}

std::string to_json(const SweepResult& r) {
  ordered_json j;
  j["pass"] = r.pass();
  j["count"] = r.entries.size();
  j["violations"] = r.violations;
  j["discarded"] = r.discarded;
  ordered_json scenarios = ordered_json::array();
  for (const auto& e : r.entries) {
    ordered_json s;
    s["seed"] = e.seed;
    s["pass"] = e.pass;
    s["worst_margins"] = worst_margins(e.worst_margins);
    s["psi_star"] = number(e.psi_star);
    s["discarded"] = e.discarded;
    if (!e.discard_reason.empty()) s["reason"] = e.discard_reason;
    s["violations"] = e.violations;
    scenarios.push_back(std::move(s));
  }
  j["scenarios"] = std::move(scenarios);
  return j.dump(2);
}

std::string to_json(const MvtPoints& m) {
  ordered_json j;
  j["t_k"] = m.t_k;
  j["delay"] = m.delay;
  j["points"] = {m.points[0], m.points[1], m.points[2]};
  j["residuals"] = {m.residuals[0], m.residuals[1], m.residuals[2]};
  j["magnitudes"] = {m.magnitudes[0], m.magnitudes[1], m.magnitudes[2]};
  j["slopes"] = {m.slopes[0], m.slopes[1], m.slopes[2]};
  j["bracketed"] = {m.bracketed[0], m.bracketed[1], m.bracketed[2]};
  j["generalized"] = {m.generalized[0], m.generalized[1], m.generalized[2]};
  return j.dump(2);
}

}  // namespace rdde
