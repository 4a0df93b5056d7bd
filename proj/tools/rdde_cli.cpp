// Command-line front end over the rdde C interface.
//
//   rdde simulate --config FILE --out FILE [--step H]
//   rdde verify   --config FILE [--report FILE] [--psi-override X]
//   rdde sweep    --seed N --count M [--report FILE] [--threads K]
//   rdde mvt      --config FILE --time T
//
// Exit codes: 0 pass, 1 inequality violation, 2 usage / config / validation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rdde/rdde.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct ProblemDeleter {
  void operator()(rdde_problem* p) const { rdde_problem_destroy(p); }
};
struct TrajectoryDeleter {
  void operator()(rdde_trajectory* t) const { rdde_trajectory_destroy(t); }
};
struct SimulationDeleter {
  void operator()(rdde_simulation* s) const { rdde_simulation_destroy(s); }
};
struct ReportDeleter {
  void operator()(rdde_report* r) const { rdde_report_destroy(r); }
};
struct SweepDeleter {
  void operator()(rdde_sweep* s) const { rdde_sweep_destroy(s); }
};

using ProblemPtr = std::unique_ptr<rdde_problem, ProblemDeleter>;

int report_error(rdde_status status) {
  std::cerr << "rdde: " << rdde_status_string(status) << ": " << rdde_last_error() << "\n";
  return kExitUsage;
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "rdde: cannot write " << path << "\n";
    return false;
  }
  out << text;
  return static_cast<bool>(out);
}

std::optional<ProblemPtr> load(const std::string& path, const std::optional<double>& step,
                               int& exit_code) {
  rdde_problem* raw = nullptr;
  const rdde_status st = rdde_problem_load(path.c_str(), step ? &*step : nullptr, &raw);
  if (st != RDDE_OK) {
    exit_code = report_error(st);
    return std::nullopt;
  }
  return ProblemPtr(raw);
}

int cmd_simulate(const std::string& config, const std::string& out_path,
                 const std::optional<double>& step) {
  int code = kExitPass;
  auto problem = load(config, step, code);
  if (!problem) return code;

  rdde_simulation* raw = nullptr;
  const rdde_status st = rdde_simulate(problem->get(), &raw);
  if (st != RDDE_OK) return report_error(st);
  std::unique_ptr<rdde_simulation, SimulationDeleter> sim(raw);

  std::string csv = "t,y,dy,d2y,d3y,norm,u,psi,env_lo,env_hi\n";
  char buf[512];
  const std::size_t rows = rdde_simulation_row_count(sim.get());
  for (std::size_t i = 0; i < rows; ++i) {
    rdde_row r{};
    rdde_simulation_row(sim.get(), i, &r);
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.y, r.dy,
                  r.d2y, r.d3y, r.norm, r.u, r.psi, r.env_lo, r.env_hi);
    csv += buf;
  }
  return write_text(out_path, csv) ? kExitPass : kExitUsage;
}

int cmd_verify(const std::string& config, const std::string& report_path,
               const std::optional<double>& psi_override) {
  int code = kExitPass;
  auto problem = load(config, std::nullopt, code);
  if (!problem) return code;

  rdde_report* raw = nullptr;
  const rdde_status st =
      rdde_verify(problem->get(), psi_override ? &*psi_override : nullptr, &raw);
  if (st != RDDE_OK) return report_error(st);
  std::unique_ptr<rdde_report, ReportDeleter> report(raw);

  if (!report_path.empty() && !write_text(report_path, rdde_report_json(report.get()))) {
    return kExitUsage;
  }
  if (rdde_report_discarded(report.get())) {
    std::cerr << "rdde: integration blew up; no inequality was judged\n";
    return kExitUsage;
  }
  const bool passed = rdde_report_passed(report.get()) != 0;
  std::cout << (passed ? "PASS" : "FAIL") << " violations=" << rdde_report_violations(report.get())
            << " psi_star=" << rdde_report_psi_star(report.get()) << "\n";
  return passed ? kExitPass : kExitViolation;
}

int cmd_sweep(long long seed, long long count, const std::string& report_path, unsigned threads) {
  if (seed < 0) {
    std::cerr << "rdde: --seed must be >= 0\n";
    return kExitUsage;
  }
  if (count < 1) {
    std::cerr << "rdde: --count must be >= 1\n";
    return kExitUsage;
  }
  rdde_sweep* raw = nullptr;
  const rdde_status st = rdde_sweep_run(static_cast<uint64_t>(seed), static_cast<uint64_t>(count),
                                        threads, &raw);
  if (st != RDDE_OK) return report_error(st);
  std::unique_ptr<rdde_sweep, SweepDeleter> result(raw);

  if (!report_path.empty() && !write_text(report_path, rdde_sweep_json(result.get()))) {
    return kExitUsage;
  }
  const bool passed = rdde_sweep_passed(result.get()) != 0;
  std::cout << (passed ? "PASS" : "FAIL") << " scenarios=" << count
            << " violations=" << rdde_sweep_violations(result.get())
            << " discarded=" << rdde_sweep_discarded(result.get()) << "\n";
  return passed ? kExitPass : kExitViolation;
}

int cmd_mvt(const std::string& config, double time) {
  int code = kExitPass;
  auto problem = load(config, std::nullopt, code);
  if (!problem) return code;

  rdde_problem_info info{};
  rdde_problem_get_info(problem->get(), &info);
  if (time < info.t0 || time > info.tf) {
    std::cerr << "rdde: --time must lie in [" << info.t0 << ", " << info.tf << "]\n";
    return kExitUsage;
  }

  rdde_trajectory* raw = nullptr;
  rdde_status st = rdde_integrate(problem->get(), &raw);
  if (st != RDDE_OK) return report_error(st);
  std::unique_ptr<rdde_trajectory, TrajectoryDeleter> tr(raw);

  rdde_mvt_points mv{};
  st = rdde_mvt_locate(tr.get(), time, &mv);
  if (st != RDDE_OK) return report_error(st);
  char* json = nullptr;
  st = rdde_mvt_to_json(&mv, &json);
  if (st != RDDE_OK) return report_error(st);
  std::cout << json << "\n";
  rdde_string_free(json);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrate third-order retarded delay equations and check their norm envelope"};
  app.require_subcommand(1);

  std::string config;
  std::string out_path;
  std::string report_path;
  std::optional<double> step;
  std::optional<double> psi_override;
  long long seed = 0;
  long long count = 0;
  unsigned threads = 0;
  double time = 0.0;

  CLI::App* simulate = app.add_subcommand("simulate", "write the trajectory table as CSV");
  simulate->add_option("--config", config, "problem JSON")->required();
  simulate->add_option("--out", out_path, "CSV output path")->required();
  simulate->add_option("--step", step, "override the integration step");

  CLI::App* verify = app.add_subcommand("verify", "check every inequality on the grid");
  verify->add_option("--config", config, "problem JSON")->required();
  verify->add_option("--report", report_path, "JSON report path");
  verify->add_option("--psi-override", psi_override,
                     "debug: replace the dominating rate in the envelope check");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "verify randomly generated scenarios");
  sweep_cmd->add_option("--seed", seed, "first seed")->required();
  sweep_cmd->add_option("--count", count, "number of scenarios")->required();
  sweep_cmd->add_option("--report", report_path, "JSON summary path");
  sweep_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

  CLI::App* mvt = app.add_subcommand("mvt", "locate the mean-value points at one time");
  mvt->add_option("--config", config, "problem JSON")->required();
  mvt->add_option("--time", time, "base time t_k")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (simulate->parsed()) return cmd_simulate(config, out_path, step);
  if (verify->parsed()) return cmd_verify(config, report_path, psi_override);
  if (sweep_cmd->parsed()) return cmd_sweep(seed, count, report_path, threads);
  if (mvt->parsed()) return cmd_mvt(config, time);
  return kExitUsage;
}
