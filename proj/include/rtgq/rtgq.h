/*
 * rtgq: stationary analysis of the M/G/1 retrial queue with linear retrial
 * rate (trucks waiting for a yard crane).
 *
 * Every object crosses this boundary as an opaque handle created by a
 * rtgq_*_create / rtgq_*_solve / rtgq_simulate call and released by the
 * matching *_destroy. Functions return RTGQ_OK or an error status; the text
 * of the most recent error on the calling thread is available from
 * rtgq_last_error_message().
 */
#ifndef RTGQ_RTGQ_H
#define RTGQ_RTGQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(RTGQ_BUILDING_LIBRARY)
#define RTGQ_API __declspec(dllexport)
#else
#define RTGQ_API __declspec(dllimport)
#endif
#else
#define RTGQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rtgq_status {
  RTGQ_OK = 0,
  RTGQ_E_INVALID_ARGUMENT = 1,
  RTGQ_E_PARSE = 2,
  RTGQ_E_VALIDATION = 3,
  RTGQ_E_UNKNOWN_FIELD = 4,
  RTGQ_E_DOMAIN = 5,
  RTGQ_E_UNSUPPORTED = 6,
  RTGQ_E_UNSTABLE = 7,
  RTGQ_E_NONCONVERGENCE = 8,
  RTGQ_E_BUDGET = 9,
  RTGQ_E_CONFIG = 10,
  RTGQ_E_INSUFFICIENT_DATA = 11,
  RTGQ_E_OVERFLOW = 12,
  RTGQ_E_IO = 13,
  RTGQ_E_INTERNAL = 14
} rtgq_status;

/* Stable lowercase name, e.g. "unstable". */
RTGQ_API const char* rtgq_status_name(rtgq_status status);
/* Message of the last failing call on this thread; "" if none. */
RTGQ_API const char* rtgq_last_error_message(void);

typedef struct rtgq_scenario rtgq_scenario;
typedef struct rtgq_chain rtgq_chain;
typedef struct rtgq_simulation rtgq_simulation;
typedef struct rtgq_text rtgq_text;

/* Owned, NUL-terminated text produced by the library. */
RTGQ_API const char* rtgq_text_data(const rtgq_text* text);
RTGQ_API size_t rtgq_text_size(const rtgq_text* text);
RTGQ_API void rtgq_text_destroy(rtgq_text* text);

/* ---- scenarios ---------------------------------------------------------- */

/* service uses the grammar exp:<mu> | det:<d> | erlang:<k>:<rate> |
 * hyper2:<p>:<mu1>:<mu2>. */
RTGQ_API rtgq_status rtgq_scenario_create(double lambda, double theta, const char* service,
                                          rtgq_scenario** out);
/* document: {"lambda": F, "theta": F, "service": "SPEC"} */
RTGQ_API rtgq_status rtgq_scenario_parse(const char* document, rtgq_scenario** out);
RTGQ_API void rtgq_scenario_destroy(rtgq_scenario* scenario);

RTGQ_API double rtgq_scenario_lambda(const rtgq_scenario* scenario);
RTGQ_API double rtgq_scenario_theta(const rtgq_scenario* scenario);

/* ---- closed-form measures ----------------------------------------------- */

typedef struct rtgq_analytic_report {
  double rho;
  int stable; /* 1 iff rho < 1; the fields below are 0 otherwise */
  double n_mean;
  double w_mean;
  double pi0;
  double pk_n_mean;
} rtgq_analytic_report;

RTGQ_API rtgq_status rtgq_analyze(const rtgq_scenario* scenario, rtgq_analytic_report* out);
RTGQ_API rtgq_status rtgq_analyze_json(const rtgq_scenario* scenario, rtgq_text** out);
RTGQ_API rtgq_status rtgq_evaluate_pgf(const rtgq_scenario* scenario, double z, double* out);

typedef struct rtgq_derivative_check {
  double numeric;
  double closed_form;
  double abs_gap;
} rtgq_derivative_check;

RTGQ_API rtgq_status rtgq_derivative_crosscheck(const rtgq_scenario* scenario,
                                                rtgq_derivative_check* out);

/* ---- embedded chain ------------------------------------------------------ */

/* truncation == 0 selects the automatic doubling policy. */
RTGQ_API rtgq_status rtgq_chain_solve(const rtgq_scenario* scenario, size_t truncation,
                                      rtgq_chain** out);
RTGQ_API void rtgq_chain_destroy(rtgq_chain* chain);

typedef struct rtgq_chain_summary {
  size_t truncation;
  double pi0;
  double mean;
  double residual;
  double tail_mass;
  int truncation_suspect;
} rtgq_chain_summary;

RTGQ_API rtgq_status rtgq_chain_summary_get(const rtgq_chain* chain, rtgq_chain_summary* out);
/* Borrowed view valid until rtgq_chain_destroy. */
RTGQ_API rtgq_status rtgq_chain_pi(const rtgq_chain* chain, const double** data, size_t* length);
RTGQ_API rtgq_status rtgq_chain_json(const rtgq_chain* chain, rtgq_text** out);
RTGQ_API rtgq_status rtgq_chain_pi_csv(const rtgq_chain* chain, rtgq_text** out);

/* ---- simulation ----------------------------------------------------------- */

typedef struct rtgq_sim_config {
  uint64_t seed;
  int has_warmup; /* 0: warm-up of max(1e4, measured / 10) departures */
  uint64_t warmup_departures;
  uint64_t measured_departures;
  uint64_t batches;
} rtgq_sim_config;

/* seed 42, 1e6 measured departures, 32 batches, default warm-up. */
RTGQ_API void rtgq_sim_config_default(rtgq_sim_config* cfg);

RTGQ_API rtgq_status rtgq_simulate(const rtgq_scenario* scenario, const rtgq_sim_config* cfg,
                                   rtgq_simulation** out);
RTGQ_API void rtgq_simulation_destroy(rtgq_simulation* sim);

typedef struct rtgq_sim_summary {
  double n_mean;
  double n_ci_half;
  double w_mean;
  double w_ci_half;
  double utilization;
  double sim_time;
  uint64_t departures;
  uint64_t events;
  int stationary;
} rtgq_sim_summary;

RTGQ_API rtgq_status rtgq_simulation_summary_get(const rtgq_simulation* sim, rtgq_sim_summary* out);
RTGQ_API rtgq_status rtgq_simulation_histogram(const rtgq_simulation* sim, const uint64_t** counts,
                                               size_t* length);
RTGQ_API rtgq_status rtgq_simulation_json(const rtgq_simulation* sim, rtgq_text** out);

/* ---- sweep and validation ---------------------------------------------- */

typedef struct rtgq_sweep_spec {
  double rho_min;
  double rho_max;
  size_t steps;
  double theta;
  const char* service;
  int simulate;        /* nonzero: run the simulator at every point */
  rtgq_sim_config sim; /* sim.seed is the master seed */
} rtgq_sweep_spec;

RTGQ_API rtgq_status rtgq_sweep_csv(const rtgq_sweep_spec* spec, rtgq_text** out);
RTGQ_API rtgq_status rtgq_sweep_gnuplot(const char* csv_path, rtgq_text** out);

/* *passed is set to 1/0; *report receives the JSON report. An unstable
 * scenario is a failed validation, not an error status. */
RTGQ_API rtgq_status rtgq_validate(const rtgq_scenario* scenario, const rtgq_sim_config* cfg,
                                   double rel_tol, int* passed, rtgq_text** report);

#ifdef __cplusplus
}
#endif

#endif /* RTGQ_RTGQ_H */
