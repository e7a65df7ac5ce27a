/* C interface to the rwd library. All strings are UTF-8, NUL-terminated.
 * Strings returned through `char**` are owned by the caller and released
 * with rwd_string_free. On failure the out-parameters are left untouched
 * and rwd_last_error() describes the problem. */
#ifndef RWD_RWD_H
#define RWD_RWD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef RWD_BUILDING_LIBRARY
#    define RWD_API __declspec(dllexport)
#  else
#    define RWD_API __declspec(dllimport)
#  endif
#else
#  define RWD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rwd_status {
  RWD_OK = 0,
  RWD_ERR_USAGE = 1,    /* bad argument to the API itself */
  RWD_ERR_INPUT = 2,    /* malformed source, scenario or net */
  RWD_ERR_ANALYSIS = 3, /* state space, ergodicity or solver failure */
  RWD_ERR_INTERNAL = 4
} rwd_status;

typedef struct rwd_program rwd_program;
typedef struct rwd_net rwd_net;

RWD_API const char* rwd_version(void);
/* Message of the last failed call on this thread; "" if none. */
RWD_API const char* rwd_last_error(void);
RWD_API void rwd_string_free(char* s);

/* ---- Ariel ---- */

/* Checks a NAME=VALUE definitions document on its own. */
RWD_API rwd_status rwd_definitions_check(const char* definitions, size_t* count);
/* `definitions` holds NAME=VALUE lines and may be NULL. Diagnostics are
 * "line:col: message" relative to whichever text is at fault. */
RWD_API rwd_status rwd_program_compile(const char* source, const char* definitions, rwd_program** out);
RWD_API void rwd_program_free(rwd_program* program);
RWD_API rwd_status rwd_program_rcode(const rwd_program* program, char** out);
RWD_API rwd_status rwd_program_config(const rwd_program* program, char** out);
RWD_API rwd_status rwd_program_summary(const rwd_program* program, size_t* tasks, size_t* watchdogs,
                                       size_t* logicals, size_t* clauses);

/* ---- fault-injection simulation ---- */

typedef struct rwd_sim_options {
  int override_seed;   /* nonzero: use `seed` instead of the scenario's */
  uint64_t seed;
  size_t replications; /* runs with seeds seed, seed+1, ...; 0 means 1 */
  const char* policy;  /* NULL keeps the scenario's r-code; else "OR", "AND", "2oo3" */
} rwd_sim_options;

RWD_API void rwd_sim_options_default(rwd_sim_options* options);
/* Metrics CSV with one row per run; `trace` (may be NULL) receives the
 * event trace of the first run. */
RWD_API rwd_status rwd_simulate(const char* scenario_json, const char* base_dir, const rwd_sim_options* options,
                                char** metrics_csv, char** trace);

/* ---- GSPN ---- */

typedef struct rwd_solve_options {
  double tolerance;
  size_t state_cap;
} rwd_solve_options;

RWD_API void rwd_solve_options_default(rwd_solve_options* options);
RWD_API rwd_status rwd_net_parse(const char* text, rwd_net** out);
RWD_API void rwd_net_free(rwd_net* net);
RWD_API rwd_status rwd_net_write(const rwd_net* net, char** out);
RWD_API rwd_status rwd_net_counts(const rwd_net* net, size_t* places, size_t* transitions);
/* Either output may be NULL. */
RWD_API rwd_status rwd_net_solve(const rwd_net* net, const rwd_solve_options* options, char** states_csv,
                                 char** throughput_csv);
RWD_API rwd_status rwd_net_invariants(const rwd_net* net, char** out);

typedef struct rwd_query_result {
  int holds;
  int has_state;
  size_t state;   /* witness (exists) or counterexample (always) */
} rwd_query_result;

/* `place` = 0 in every reachable state (tangible states only if tangible_only). */
RWD_API rwd_status rwd_net_query_always_zero(const rwd_net* net, const char* place, int tangible_only,
                                             size_t state_cap, rwd_query_result* result, char** marking);
/* Some reachable state enables one of the comma-separated `transitions`
 * while `place` holds at least k tokens. */
RWD_API rwd_status rwd_net_query_exists_enabled(const rwd_net* net, const char* transitions, const char* place,
                                                int k, size_t state_cap, rwd_query_result* result,
                                                char** marking);

/* ---- redundant watchdog models ---- */

typedef struct rwd_params {
  int n_replicas;
  double rate_activity;
  double rate_fault;
  double rate_cycle;
  double rate_reboot;
  double rate_timeout;
  const char* policy;        /* "OR", "AND", "2oo3", ... */
  int single_server_timeout; /* nonzero: timeout and w_fault use one server */
} rwd_params;

RWD_API void rwd_params_default(rwd_params* params);
/* `rendering` (may be NULL) receives a readable description. */
RWD_API rwd_status rwd_model_build(const rwd_params* params, rwd_net** out, char** rendering);
/* `policies` and `rates` are comma-separated. Returns RWD_ERR_ANALYSIS if
 * any row failed; the outputs are filled in either case. */
RWD_API rwd_status rwd_sweep(const rwd_params* params, const char* policies, const char* rates,
                             const rwd_solve_options* options, char** csv, char** gnuplot);

typedef struct rwd_mc_options {
  double horizon;
  double warmup;
  size_t replications;
  uint64_t seed;
  double z;   /* agreement band in standard errors */
} rwd_mc_options;

RWD_API void rwd_mc_options_default(rwd_mc_options* options);
/* Analytic against Monte Carlo throughputs for each policy in `policies`.
 * `all_within` is set to 1 when every transition agrees. */
RWD_API rwd_status rwd_validate(const rwd_params* params, const char* policies, const rwd_mc_options* options,
                                char** report_csv, int* all_within);

#ifdef __cplusplus
}
#endif

#endif
