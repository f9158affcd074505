/* C interface to the empirica library. All functions return an
 * empirica_status; on failure empirica_last_error() describes the problem
 * for the calling thread. Handles are opaque and owned by the caller. */
#ifndef EMPIRICA_H
#define EMPIRICA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(EMPIRICA_BUILDING)
#define EMPIRICA_API __attribute__((visibility("default")))
#else
#define EMPIRICA_API
#endif

typedef enum empirica_status {
  EMPIRICA_OK = 0,
  EMPIRICA_INVALID_ARGUMENT = 1,
  EMPIRICA_EMPTY_SAMPLE = 2,
  EMPIRICA_NON_CONVERGED = 3,
  EMPIRICA_CASE_UNDEFINED = 4,
  EMPIRICA_FACTORIZATION_FAILURE = 5,
  EMPIRICA_NUMERIC_HEALTH = 6,
  EMPIRICA_HORIZON_HIT = 7,
  EMPIRICA_EMPTY_RUN = 8,
  EMPIRICA_CONFIG = 9,
  EMPIRICA_IO = 10,
  EMPIRICA_INTERNAL = 99
} empirica_status;

typedef enum empirica_counting_class {
  EMPIRICA_UNIT_JUMPS = 0,
  EMPIRICA_INTEGER_JUMPS = 1,
  EMPIRICA_NEITHER = 2
} empirica_counting_class;

typedef struct empirica_step empirica_step;
typedef struct empirica_cdf empirica_cdf;
typedef struct empirica_result empirica_result;

EMPIRICA_API const char* empirica_version(void);
/* Message of the last failed call on this thread; "" if none. */
EMPIRICA_API const char* empirica_last_error(void);
EMPIRICA_API const char* empirica_status_name(int status);

/* Step functions. */
EMPIRICA_API int empirica_step_create(double base, const double* times, const double* sizes,
                                      size_t count, empirica_step** out);
/* {"base": b, "jumps": [[time, size], ...]}; unsorted jumps are merged. */
EMPIRICA_API int empirica_step_from_json(const char* json, empirica_step** out);
EMPIRICA_API void empirica_step_destroy(empirica_step* f);
EMPIRICA_API int empirica_step_eval(const empirica_step* f, double t, double* out);
EMPIRICA_API int empirica_step_left_limit(const empirica_step* f, double t, double* out);
EMPIRICA_API int empirica_step_oscillation(const empirica_step* f, double lo, double hi,
                                           double* out);
EMPIRICA_API int empirica_step_w_hat(const empirica_step* f, int m, double delta, double* out);
EMPIRICA_API int empirica_step_classify(const empirica_step* f, int* out);
EMPIRICA_API int empirica_j1_local(const empirica_step* f, const empirica_step* g, int m,
                                   double* out);
EMPIRICA_API int empirica_j1_distance(const empirica_step* f, const empirica_step* g, int m_max,
                                      double* out);

/* Distribution functions from a JSON description such as
 * {"name":"polygonal","tau":0.25,"gamma":0.5}. */
EMPIRICA_API int empirica_cdf_create(const char* spec_json, empirica_cdf** out);
EMPIRICA_API void empirica_cdf_destroy(empirica_cdf* f);
EMPIRICA_API int empirica_cdf_eval(const empirica_cdf* f, double t, double* out);
EMPIRICA_API int empirica_cdf_left_limit(const empirica_cdf* f, double t, double* out);
EMPIRICA_API int empirica_cdf_quantile(const empirica_cdf* f, double u, double* out);
/* numeric != 0 selects difference quotients instead of the closed form. */
EMPIRICA_API int empirica_cdf_derivatives(const empirica_cdf* f, double tau, int numeric,
                                          double* rho1, double* rho2);

/* Characteristic functions of (alpha_n(t), beta_n(t)) and of the limit. */
EMPIRICA_API int empirica_psi_limit(const empirica_cdf* f, double tau, double t, double x,
                                    double y, double* re, double* im);
EMPIRICA_API int empirica_psi_n(const empirica_cdf* f, double tau, double t, size_t n, double x,
                                double y, double* re, double* im);
EMPIRICA_API int empirica_psi_n_bruteforce(const empirica_cdf* f, double tau, double t, size_t n,
                                           double x, double y, double* re, double* im);

/* Experiments: "fidi", "independence", "linkage", "modulus", "changepoint". */
typedef struct empirica_run_options {
  int override_seed; /* nonzero: use `seed` instead of the config's */
  uint64_t seed;
  unsigned threads; /* 0: hardware concurrency; never changes results */
} empirica_run_options;

/* config_json may be NULL or "" for the experiment's defaults. A run whose
 * checks fail still returns EMPIRICA_OK; see empirica_result_passed. */
EMPIRICA_API int empirica_run(const char* experiment, const char* config_json,
                              const empirica_run_options* options, empirica_result** out);
EMPIRICA_API const char* empirica_result_report(const empirica_result* r);
EMPIRICA_API const char* empirica_result_metrics_csv(const empirica_result* r);
EMPIRICA_API int empirica_result_passed(const empirica_result* r);
EMPIRICA_API void empirica_result_destroy(empirica_result* r);

#ifdef __cplusplus
}
#endif

#endif /* EMPIRICA_H */
