/*
 * rdde: third-order linear delay differential equations with retarded
 * argument, and machine checks of their exponential norm envelope.
 *
 *   y'''(t) + m1(t) y''(t - d(t)) + m2(t) y'(t - d(t)) + m3(t) y(t - d(t)) = 0
 *
 * C interface. All objects are opaque handles created by rdde_*_create-style
 * calls and released with the matching rdde_*_destroy. Every fallible call
 * returns an rdde_status; on failure rdde_last_error() describes the cause
 * (thread-local, valid until the next failing call on the same thread).
 * Handles are immutable after creation and may be shared across threads.
 */
#ifndef RDDE_RDDE_H
#define RDDE_RDDE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RDDE_BUILDING_LIBRARY)
#    define RDDE_API __declspec(dllexport)
#  else
#    define RDDE_API __declspec(dllimport)
#  endif
#else
#  define RDDE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rdde_status {
  RDDE_OK = 0,
  RDDE_ERR_INVALID_ARGUMENT = 1, /* null handle, bad count, ... */
  RDDE_ERR_CONFIG = 2,           /* malformed/missing config key, expression syntax */
  RDDE_ERR_VALIDATION = 3,       /* delay band, interval, step constraints */
  RDDE_ERR_EVALUATION = 4,       /* division by zero / non-finite expression value */
  RDDE_ERR_INTEGRATION = 5,      /* non-finite state or norm blow-up */
  RDDE_ERR_DOMAIN = 6,           /* time outside the trajectory domain, delay(t) = 0 for MVT */
  RDDE_ERR_IO = 7,
  RDDE_ERR_INTERNAL = 8
} rdde_status;

typedef enum rdde_regime { RDDE_REGIME_ZERO = 0, RDDE_REGIME_RETARDED = 1 } rdde_regime;

typedef struct rdde_problem rdde_problem;
typedef struct rdde_trajectory rdde_trajectory;
typedef struct rdde_simulation rdde_simulation;
typedef struct rdde_report rdde_report;
typedef struct rdde_sweep rdde_sweep;

/* Expression texts are in the variable t: numbers, t, + - * / ^ (constant
 * exponents), unary minus, sin() cos() exp(). */
typedef struct rdde_problem_desc {
  const char* m1;
  const char* m2;
  const char* m3;
  const char* delay;
  const char* history;
  double t0;
  double tf;
  double step;
} rdde_problem_desc;

typedef struct rdde_problem_info {
  double t0;
  double tf;
  double step;
  double delay_max;
  double sup_coefficients[3];
  rdde_regime regime;
} rdde_problem_info;

/* w, w', w'', w''' at t */
typedef struct rdde_sample {
  double t;
  double y;
  double y1;
  double y2;
  double y3;
} rdde_sample;

typedef struct rdde_row {
  double t;
  double y;
  double dy;
  double d2y;
  double d3y;
  double norm;
  double u;
  double psi;
  double env_lo;
  double env_hi;
} rdde_row;

typedef struct rdde_mvt_points {
  double t_k;
  double delay;
  double points[3];
  double residuals[3];
  double magnitudes[3];
  double slopes[3];
  int bracketed[3];
  int generalized[3];
} rdde_mvt_points;

RDDE_API const char* rdde_version(void);
RDDE_API const char* rdde_status_string(rdde_status status);
RDDE_API const char* rdde_last_error(void);

/* Strings returned through char** out-parameters are released with this. */
RDDE_API void rdde_string_free(char* s);

/* ---- problems ---------------------------------------------------------- */

RDDE_API rdde_status rdde_problem_create(const rdde_problem_desc* desc, rdde_problem** out);
/* JSON object with exactly the keys m1, m2, m3, delay, history, t0, tf, step.
 * step_override may be NULL. */
RDDE_API rdde_status rdde_problem_from_json(const char* json, const double* step_override,
                                            rdde_problem** out);
RDDE_API rdde_status rdde_problem_load(const char* path, const double* step_override,
                                       rdde_problem** out);
RDDE_API void rdde_problem_destroy(rdde_problem* p);
RDDE_API rdde_status rdde_problem_get_info(const rdde_problem* p, rdde_problem_info* out);
RDDE_API rdde_status rdde_problem_delay(const rdde_problem* p, double t, double* out);
/* Config JSON of the generated scenario for a seed. */
RDDE_API rdde_status rdde_scenario_config(uint64_t seed, char** json_out);

/* ---- trajectories ------------------------------------------------------ */

RDDE_API rdde_status rdde_integrate(const rdde_problem* p, rdde_trajectory** out);
RDDE_API void rdde_trajectory_destroy(rdde_trajectory* tr);
RDDE_API size_t rdde_trajectory_node_count(const rdde_trajectory* tr);
RDDE_API double rdde_trajectory_node(const rdde_trajectory* tr, size_t i);
RDDE_API rdde_status rdde_trajectory_sample(const rdde_trajectory* tr, double t, rdde_sample* out);
RDDE_API rdde_status rdde_mvt_locate(const rdde_trajectory* tr, double t_k, rdde_mvt_points* out);
RDDE_API rdde_status rdde_mvt_to_json(const rdde_mvt_points* mv, char** json_out);

/* ---- simulation table -------------------------------------------------- */

/* One row per grid node: state, norm, energy, pointwise rate and the
 * envelope anchored at t0 with the dominating rate. */
RDDE_API rdde_status rdde_simulate(const rdde_problem* p, rdde_simulation** out);
RDDE_API void rdde_simulation_destroy(rdde_simulation* s);
RDDE_API size_t rdde_simulation_row_count(const rdde_simulation* s);
RDDE_API rdde_status rdde_simulation_row(const rdde_simulation* s, size_t i, rdde_row* out);
RDDE_API double rdde_simulation_psi_star(const rdde_simulation* s);

/* ---- verification ------------------------------------------------------ */

/* psi_override may be NULL; when set it replaces the dominating rate in the
 * envelope check. A blown-up integration still yields a report, flagged
 * discarded. */
RDDE_API rdde_status rdde_verify(const rdde_problem* p, const double* psi_override,
                                 rdde_report** out);
RDDE_API void rdde_report_destroy(rdde_report* r);
RDDE_API int rdde_report_passed(const rdde_report* r);
RDDE_API int rdde_report_discarded(const rdde_report* r);
RDDE_API size_t rdde_report_violations(const rdde_report* r);
RDDE_API double rdde_report_psi_star(const rdde_report* r);
/* Owned by the report. */
RDDE_API const char* rdde_report_json(const rdde_report* r);

/* threads = 0 picks the hardware concurrency. count must be >= 1. */
RDDE_API rdde_status rdde_sweep_run(uint64_t seed, uint64_t count, unsigned threads,
                                    rdde_sweep** out);
RDDE_API void rdde_sweep_destroy(rdde_sweep* s);
RDDE_API int rdde_sweep_passed(const rdde_sweep* s);
RDDE_API size_t rdde_sweep_violations(const rdde_sweep* s);
RDDE_API size_t rdde_sweep_discarded(const rdde_sweep* s);
RDDE_API const char* rdde_sweep_json(const rdde_sweep* s);

#ifdef __cplusplus
}
#endif

#endif /* RDDE_RDDE_H */
