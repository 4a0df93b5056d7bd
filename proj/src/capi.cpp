#include "rdde/rdde.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "harness.hpp"
#include "report_json.hpp"

struct rdde_problem {
  rdde::ValidatedProblem problem;
};

struct rdde_trajectory {
  rdde::Trajectory trajectory;
};

struct rdde_simulation {
  std::vector<rdde_row> rows;
  double psi_star;
};

struct rdde_report {
  rdde::VerificationReport report;
  std::string json;
};

struct rdde_sweep {
  rdde::SweepResult result;
  std::string json;
};

namespace {

thread_local std::string last_error;

rdde_status fail(rdde_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class F>
rdde_status guarded(F&& body) {
  try {
    body();
    return RDDE_OK;
  } catch (const rdde::ConfigError& e) {
    return fail(RDDE_ERR_CONFIG, e.what());
  } catch (const rdde::expr::ParseError& e) {
    return fail(RDDE_ERR_CONFIG, e.what());
  } catch (const rdde::ValidationError& e) {
    return fail(RDDE_ERR_VALIDATION, e.what());
  } catch (const rdde::expr::EvaluationError& e) {
    return fail(RDDE_ERR_EVALUATION, e.what());
  } catch (const rdde::IntegrationError& e) {
    return fail(RDDE_ERR_INTEGRATION, e.what());
  } catch (const rdde::DomainError& e) {
    return fail(RDDE_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(RDDE_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(RDDE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RDDE_ERR_INTERNAL, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<double> optional_of(const double* v) {
  return v ? std::optional<double>(*v) : std::nullopt;
}

rdde_status make_problem(const rdde::Config& c, const double* step_override, rdde_problem** out) {
  *out = new rdde_problem{rdde::validate(rdde::to_problem(c, optional_of(step_override)))};
  return RDDE_OK;
}

}  // namespace

extern "C" {

const char* rdde_version(void) { return "1.0.0"; }

const char* rdde_status_string(rdde_status status) {
  switch (status) {
    case RDDE_OK:
      return "ok";
    case RDDE_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case RDDE_ERR_CONFIG:
      return "config error";
    case RDDE_ERR_VALIDATION:
      return "validation error";
    case RDDE_ERR_EVALUATION:
      return "evaluation error";
    case RDDE_ERR_INTEGRATION:
      return "integration error";
    case RDDE_ERR_DOMAIN:
      return "domain error";
    case RDDE_ERR_IO:
      return "i/o error";
    case RDDE_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* rdde_last_error(void) { return last_error.c_str(); }

void rdde_string_free(char* s) { std::free(s); }

rdde_status rdde_problem_create(const rdde_problem_desc* desc, rdde_problem** out) {
  if (!desc || !out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  const char* texts[] = {desc->m1, desc->m2, desc->m3, desc->delay, desc->history};
  for (const char* t : texts) {
    if (!t) return fail(RDDE_ERR_INVALID_ARGUMENT, "null expression text");
  }
  return guarded([&] {
    make_problem(rdde::Config{desc->m1, desc->m2, desc->m3, desc->delay, desc->history, desc->t0,
                              desc->tf, desc->step},
                 nullptr, out);
  });
}

rdde_status rdde_problem_from_json(const char* json, const double* step_override,
                                   rdde_problem** out) {
  if (!json || !out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { make_problem(rdde::parse_config(json), step_override, out); });
}

rdde_status rdde_problem_load(const char* path, const double* step_override, rdde_problem** out) {
  if (!path || !out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  if (!std::ifstream(path)) {
    return fail(RDDE_ERR_IO, std::string("cannot open config file ") + path);
  }
  return guarded([&] { make_problem(rdde::load_config(path), step_override, out); });
}

void rdde_problem_destroy(rdde_problem* p) { delete p; }

rdde_status rdde_problem_get_info(const rdde_problem* p, rdde_problem_info* out) {
  if (!p || !out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  const auto& v = p->problem;
  *out = rdde_problem_info{v.t0(),
                           v.tf(),
                           v.step(),
                           v.delay_max(),
                           {v.sup().m01, v.sup().m02, v.sup().m03},
                           v.regime() == rdde::DelayRegime::Zero ? RDDE_REGIME_ZERO
                                                                 : RDDE_REGIME_RETARDED};
  return RDDE_OK;
}

rdde_status rdde_problem_delay(const rdde_problem* p, double t, double* out) {
  if (!p || !out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = p->problem.delay(t); });
}

rdde_status rdde_scenario_config(uint64_t seed, char** json_out) {
  if (!json_out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  *json_out = nullptr;
  return guarded([&] { *json_out = duplicate(rdde::config_to_json(rdde::generate_scenario(seed).config)); });
}

rdde_status rdde_integrate(const rdde_problem* p, rdde_trajectory** out) {
  if (!p || !out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new rdde_trajectory{rdde::integrate(p->problem)}; });
}

void rdde_trajectory_destroy(rdde_trajectory* tr) { delete tr; }

size_t rdde_trajectory_node_count(const rdde_trajectory* tr) {
  return tr ? tr->trajectory.nodes().size() : 0;
}

double rdde_trajectory_node(const rdde_trajectory* tr, size_t i) {
  if (!tr || i >= tr->trajectory.nodes().size()) return std::nan("");
  return tr->trajectory.nodes()[i];
}

rdde_status rdde_trajectory_sample(const rdde_trajectory* tr, double t, rdde_sample* out) {
  if (!tr || !out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const rdde::StateSample s = tr->trajectory.sample(t);
    *out = rdde_sample{s.t, s.y, s.y1, s.y2, s.y3};
  });
}

rdde_status rdde_mvt_locate(const rdde_trajectory* tr, double t_k, rdde_mvt_points* out) {
  if (!tr || !out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const rdde::MvtPoints m = rdde::locate_mvt_points(tr->trajectory, t_k);
    rdde_mvt_points r{};
    r.t_k = m.t_k;
    r.delay = m.delay;
    for (int i = 0; i < 3; ++i) {
      r.points[i] = m.points[i];
      r.residuals[i] = m.residuals[i];
      r.magnitudes[i] = m.magnitudes[i];
      r.slopes[i] = m.slopes[i];
      r.bracketed[i] = m.bracketed[i] ? 1 : 0;
      r.generalized[i] = m.generalized[i] ? 1 : 0;
    }
    *out = r;
  });
}

rdde_status rdde_mvt_to_json(const rdde_mvt_points* mv, char** json_out) {
  if (!mv || !json_out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    rdde::MvtPoints m;
    m.t_k = mv->t_k;
    m.delay = mv->delay;
    for (int i = 0; i < 3; ++i) {
      m.points[i] = mv->points[i];
      m.residuals[i] = mv->residuals[i];
      m.magnitudes[i] = mv->magnitudes[i];
      m.slopes[i] = mv->slopes[i];
      m.bracketed[i] = mv->bracketed[i] != 0;
      m.generalized[i] = mv->generalized[i] != 0;
    }
    *json_out = duplicate(rdde::to_json(m));
  });
}

rdde_status rdde_simulate(const rdde_problem* p, rdde_simulation** out) {
  if (!p || !out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const rdde::Analysis a = rdde::analyze(p->problem);
    auto sim = std::make_unique<rdde_simulation>();
    sim->psi_star = a.psi.global;
    const double anchor = a.trace.norm.front();
    const double t0 = p->problem.t0();
    sim->rows.reserve(a.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
      const rdde::StateSample& w = a.trace.samples[k];
      const double grow = std::exp(a.psi.global * (w.t - t0));
      sim->rows.push_back(rdde_row{w.t, w.y, w.y1, w.y2, w.y3, a.trace.norm[k], a.trace.u[k],
                                   a.psi.pointwise[k], anchor / grow, anchor * grow});
    }
    *out = sim.release();
  });
}

void rdde_simulation_destroy(rdde_simulation* s) { delete s; }

size_t rdde_simulation_row_count(const rdde_simulation* s) { return s ? s->rows.size() : 0; }

rdde_status rdde_simulation_row(const rdde_simulation* s, size_t i, rdde_row* out) {
  if (!s || !out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  if (i >= s->rows.size()) return fail(RDDE_ERR_INVALID_ARGUMENT, "row index out of range");
  *out = s->rows[i];
  return RDDE_OK;
}

double rdde_simulation_psi_star(const rdde_simulation* s) { return s ? s->psi_star : std::nan(""); }

rdde_status rdde_verify(const rdde_problem* p, const double* psi_override, rdde_report** out) {
  if (!p || !out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  if (psi_override && !std::isfinite(*psi_override)) {
    return fail(RDDE_ERR_INVALID_ARGUMENT, "psi override must be finite");
  }
  return guarded([&] {
    rdde::VerificationOptions opts;
    opts.psi_override = optional_of(psi_override);
    auto r = std::make_unique<rdde_report>();
    r->report = rdde::run_verification(p->problem, opts);
    r->json = rdde::to_json(r->report);
    *out = r.release();
  });
}

void rdde_report_destroy(rdde_report* r) { delete r; }

int rdde_report_passed(const rdde_report* r) { return r && r->report.pass ? 1 : 0; }

int rdde_report_discarded(const rdde_report* r) { return r && r->report.discarded ? 1 : 0; }

size_t rdde_report_violations(const rdde_report* r) { return r ? r->report.violations() : 0; }

double rdde_report_psi_star(const rdde_report* r) { return r ? r->report.psi_star : std::nan(""); }

const char* rdde_report_json(const rdde_report* r) { return r ? r->json.c_str() : ""; }

rdde_status rdde_sweep_run(uint64_t seed, uint64_t count, unsigned threads, rdde_sweep** out) {
  if (!out) return fail(RDDE_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  if (count == 0) return fail(RDDE_ERR_INVALID_ARGUMENT, "count must be >= 1");
  return guarded([&] {
    auto s = std::make_unique<rdde_sweep>();
    s->result = rdde::sweep(seed, count, threads);
    s->json = rdde::to_json(s->result);
    *out = s.release();
  });
}

void rdde_sweep_destroy(rdde_sweep* s) { delete s; }

int rdde_sweep_passed(const rdde_sweep* s) { return s && s->result.pass() ? 1 : 0; }

size_t rdde_sweep_violations(const rdde_sweep* s) { return s ? s->result.violations : 0; }

size_t rdde_sweep_discarded(const rdde_sweep* s) { return s ? s->result.discarded : 0; }

const char* rdde_sweep_json(const rdde_sweep* s) { return s ? s->json.c_str() : ""; }

}  // extern "C"
