/* Exercises the C interface from C. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "empirica/empirica.h"

static int failures = 0;
static const double kPi = 3.14159265358979323846;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void steps(void) {
  const double t1[] = {0.25}, t0[] = {0.0}, one[] = {1.0};
  empirica_step *f = NULL, *g = NULL, *h = NULL;
  double v = -1.0;
  int cls = -1;
  EXPECT(empirica_step_create(0.0, t1, one, 1, &f) == EMPIRICA_OK);
  EXPECT(empirica_step_create(0.0, t0, one, 1, &g) == EMPIRICA_OK);
  EXPECT(empirica_step_eval(f, 0.25, &v) == EMPIRICA_OK && v == 1.0);
  EXPECT(empirica_step_left_limit(f, 0.25, &v) == EMPIRICA_OK && v == 0.0);
  EXPECT(empirica_step_oscillation(f, -1.0, 1.0, &v) == EMPIRICA_OK && v == 1.0);
  EXPECT(empirica_step_w_hat(f, 1, 0.3, &v) == EMPIRICA_OK && v == 0.0);
  EXPECT(empirica_step_classify(f, &cls) == EMPIRICA_OK && cls == EMPIRICA_UNIT_JUMPS);
  EXPECT(empirica_j1_local(f, g, 1, &v) == EMPIRICA_OK && fabs(v - 0.25) < 1e-12);
  EXPECT(empirica_j1_distance(f, g, 1, &v) == EMPIRICA_OK && fabs(v - 0.125) < 1e-12);

  EXPECT(empirica_step_from_json("{\"base\": 0, \"jumps\": [[0.5, 1], [0.1, 2]]}", &h) == EMPIRICA_OK);
  EXPECT(empirica_step_classify(h, &cls) == EMPIRICA_OK && cls == EMPIRICA_INTEGER_JUMPS);
  EXPECT(empirica_step_eval(h, 0.6, &v) == EMPIRICA_OK && v == 3.0);

  /* Errors leave a message and the handle untouched. */
  const double bad_times[] = {0.5, 0.1}, sizes[] = {1.0, 1.0};
  empirica_step* none = NULL;
  EXPECT(empirica_step_create(0.0, bad_times, sizes, 2, &none) == EMPIRICA_INVALID_ARGUMENT);
  EXPECT(none == NULL);
  EXPECT(strlen(empirica_last_error()) > 0);
  EXPECT(empirica_step_from_json("{\"base\": ", &none) == EMPIRICA_INVALID_ARGUMENT);
  EXPECT(empirica_step_eval(NULL, 0.0, &v) == EMPIRICA_INVALID_ARGUMENT);

  empirica_step_destroy(f);
  empirica_step_destroy(g);
  empirica_step_destroy(h);
  empirica_step_destroy(NULL);
}

static void cdfs(void) {
  empirica_cdf* u = NULL;
  empirica_cdf* p = NULL;
  double v = 0.0, r1 = 0.0, r2 = 0.0, re = 0.0, im = 0.0;
  EXPECT(empirica_cdf_create("{\"name\":\"uniform01\"}", &u) == EMPIRICA_OK);
  EXPECT(empirica_cdf_create("{\"name\":\"polygonal\",\"tau\":0.25,\"gamma\":0.5}", &p) == EMPIRICA_OK);
  EXPECT(empirica_cdf_eval(p, 0.25, &v) == EMPIRICA_OK && v == 0.5);
  EXPECT(empirica_cdf_left_limit(p, 0.25, &v) == EMPIRICA_OK && v == 0.5);
  EXPECT(empirica_cdf_quantile(p, 0.5, &v) == EMPIRICA_OK && v == 0.25);
  EXPECT(empirica_cdf_derivatives(p, 0.25, 0, &r1, &r2) == EMPIRICA_OK && fabs(r1 - 2.0) < 1e-15);
  EXPECT(empirica_cdf_derivatives(p, 0.25, 1, &r1, &r2) == EMPIRICA_OK && fabs(r2 - 2.0 / 3.0) < 1e-8);

  EXPECT(empirica_psi_limit(u, 0.0, 0.5, 1.0, 0.0, &re, &im) == EMPIRICA_OK);
  EXPECT(fabs(re - exp(-0.125)) < 1e-15 && fabs(im) < 1e-15);
  EXPECT(empirica_psi_n(u, 0.0, 0.5, 2, 0.0, kPi, &re, &im) == EMPIRICA_OK);
  EXPECT(fabs(re - 0.25) < 1e-15);
  EXPECT(empirica_psi_n_bruteforce(u, 0.0, 0.5, 2, 0.0, kPi, &re, &im) == EMPIRICA_OK);
  EXPECT(fabs(re - 0.25) < 1e-14);
  EXPECT(empirica_psi_n(u, 0.25, 0.5, 1, 0.0, 1.0, &re, &im) == EMPIRICA_CASE_UNDEFINED);

  empirica_cdf* bad = NULL;
  EXPECT(empirica_cdf_create("{\"name\":\"cauchy\"}", &bad) == EMPIRICA_CONFIG);
  EXPECT(bad == NULL);
  empirica_cdf_destroy(u);
  empirica_cdf_destroy(p);
}

static void runs(void) {
  empirica_run_options opts = {1, 5, 1};
  empirica_result* a = NULL;
  empirica_result* b = NULL;
  const char* cfg = "{\"replications\": 300}";
  EXPECT(empirica_run("linkage", cfg, &opts, &a) == EMPIRICA_OK);
  opts.threads = 4;
  EXPECT(empirica_run("linkage", cfg, &opts, &b) == EMPIRICA_OK);
  if (a && b) {
    EXPECT(strcmp(empirica_result_report(a), empirica_result_report(b)) == 0);
    EXPECT(strcmp(empirica_result_metrics_csv(a), empirica_result_metrics_csv(b)) == 0);
    EXPECT(empirica_result_passed(a) == 1);
    EXPECT(strstr(empirica_result_report(a), "\"seed\": 5") != NULL);
  }
  empirica_result_destroy(a);
  empirica_result_destroy(b);

  empirica_result* c = NULL;
  EXPECT(empirica_run("fidi", "{\"tau\": }", &opts, &c) == EMPIRICA_CONFIG);
  EXPECT(strstr(empirica_last_error(), "line") != NULL);
  EXPECT(empirica_run("nonsense", NULL, &opts, &c) == EMPIRICA_CONFIG);
  EXPECT(c == NULL);
}

int main(void) {
  EXPECT(strcmp(empirica_version(), "0.1.0") == 0);
  EXPECT(strcmp(empirica_status_name(EMPIRICA_EMPTY_RUN), "EMPTY_RUN") == 0);
  steps();
  cdfs();
  runs();
  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
