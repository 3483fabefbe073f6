#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "rauzy/rauzy.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static const char* fixture(const char* name) {
  static char buf[1024];
  snprintf(buf, sizeof buf, "%s/%s", RAUZY_FIXTURES, name);
  return buf;
}

static void test_errors(void) {
  rauzy_substitution* s = NULL;
  EXPECT(rauzy_substitution_parse(NULL, NULL, &s) == RAUZY_INVALID_ARGUMENT);
  EXPECT(strlen(rauzy_last_error()) > 0);
  EXPECT(rauzy_substitution_parse("alphabet = [\"1\"]\n[[rule]]\nletter = \"1\"\nimages = [{ word = \"11\", p = 0.5 }]\n",
                                  NULL, &s) == RAUZY_VALIDATION);
  EXPECT(s == NULL);
  EXPECT(rauzy_substitution_load("/nonexistent/file.toml", NULL, &s) != RAUZY_OK);

  /* Parametric templates need a value for p. */
  EXPECT(rauzy_substitution_load(fixture("rfib_p.toml"), NULL, &s) == RAUZY_VALIDATION);
  double p = 0.3;
  EXPECT(rauzy_substitution_load(fixture("rfib_p.toml"), &p, &s) == RAUZY_OK);
  EXPECT(rauzy_substitution_is_parametric(s) == 1);
  rauzy_substitution_free(s);

  rauzy_substitution* bad = NULL;
  rauzy_model* m = NULL;
  EXPECT(rauzy_substitution_load(fixture("bad_nonpisot.toml"), NULL, &bad) == RAUZY_OK);
  EXPECT(rauzy_model_build(bad, &m) == RAUZY_NUMERIC);
  EXPECT(strstr(rauzy_last_error(), "Pisot") != NULL);
  EXPECT(m == NULL);
  rauzy_substitution_free(bad);

  EXPECT(rauzy_model_build(NULL, &m) == RAUZY_INVALID_ARGUMENT);
  EXPECT(rauzy_cloud_markov(NULL, 0, 5, 0, 1, NULL) == RAUZY_INVALID_ARGUMENT);

  /* Freeing null handles is a no-op. */
  rauzy_substitution_free(NULL);
  rauzy_model_free(NULL);
  rauzy_cloud_free(NULL);
  rauzy_family_free(NULL);
  rauzy_string_free(NULL);
}

static void test_flow(void) {
  const double tau = (1.0 + sqrt(5.0)) / 2.0;
  rauzy_substitution* s = NULL;
  rauzy_model* m = NULL;
  EXPECT(rauzy_substitution_load(fixture("rfib.toml"), NULL, &s) == RAUZY_OK);
  EXPECT(rauzy_substitution_letters(s) == 2);
  EXPECT(rauzy_substitution_is_parametric(s) == 0);
  EXPECT(rauzy_model_build(s, &m) == RAUZY_OK);
  EXPECT(rauzy_model_dim(m) == 1);
  EXPECT(fabs(rauzy_model_lambda(m) - tau) < 1e-12);

  double r[2];
  EXPECT(rauzy_model_right(m, r, 2) == RAUZY_OK);
  EXPECT(fabs(r[0] - 1.0 / tau) < 1e-12);
  EXPECT(fabs(r[1] - 1.0 / (tau * tau)) < 1e-12);
  EXPECT(rauzy_model_right(m, r, 1) == RAUZY_INVALID_ARGUMENT);

  char* info = NULL;
  EXPECT(rauzy_model_info_json(m, &info) == RAUZY_OK);
  EXPECT(info != NULL && strstr(info, "\"lambda\"") != NULL);
  rauzy_string_free(info);

  rauzy_cloud* a = NULL;
  rauzy_cloud* b = NULL;
  EXPECT(rauzy_cloud_markov(m, 0, 22, 1, 1, &a) == RAUZY_OK);
  EXPECT(rauzy_cloud_markov(m, 0, 22, 2, 2, &b) == RAUZY_OK);
  EXPECT(rauzy_cloud_dim(a) == 1);
  EXPECT(rauzy_cloud_letters(a) == 2);
  EXPECT(rauzy_cloud_count(a, 0) + rauzy_cloud_count(a, 1) == 46368);
  EXPECT(fabs(rauzy_cloud_mass(a, 0) - 1.0 / tau) < 0.01);
  double x = 0.0;
  EXPECT(rauzy_cloud_point(a, 0, 0, &x) == RAUZY_OK);
  EXPECT(x == 0.0);
  EXPECT(rauzy_cloud_point(a, 0, 1u << 30, &x) == RAUZY_INVALID_ARGUMENT);
  double mk = -1.0;
  EXPECT(rauzy_cloud_mk_distance(a, b, 0, &mk) == RAUZY_OK);
  EXPECT(mk >= 0.0 && mk < 0.02);
  EXPECT(rauzy_cloud_mk_distance(a, b, 7, &mk) == RAUZY_INVALID_ARGUMENT);

  rauzy_cloud* big = NULL;
  EXPECT(rauzy_cloud_markov(m, 0, 60, 1, 1, &big) == RAUZY_LIMIT);
  EXPECT(big == NULL);

  rauzy_cloud* e = NULL;
  EXPECT(rauzy_cloud_enumerate(m, 6, &e) == RAUZY_OK);
  EXPECT(fabs(rauzy_cloud_mass(e, 0) + rauzy_cloud_mass(e, 1) - 1.0) < 1e-12);
  rauzy_cloud* g = NULL;
  EXPECT(rauzy_cloud_gifs_sets(m, 20, 1e-3, &g) == RAUZY_OK);
  rauzy_cloud* c = NULL;
  EXPECT(rauzy_cloud_chaos(m, 5000, 100, 3, &c) == RAUZY_OK);
  EXPECT(rauzy_cloud_count(c, 0) + rauzy_cloud_count(c, 1) == 4900);
  EXPECT(rauzy_cloud_chaos(m, 50, 100, 3, &c) != RAUZY_OK);

  char* summary = NULL;
  char* artifacts = NULL;
  EXPECT(rauzy_run_cloud(m, "{\"level\": 12, \"seed\": 4}", "capi_out", &summary, &artifacts) == RAUZY_OK);
  EXPECT(summary != NULL && strstr(summary, "\"total\"") != NULL);
  EXPECT(artifacts != NULL && strstr(artifacts, "cloud.csv") != NULL);
  rauzy_string_free(summary);
  rauzy_string_free(artifacts);
  EXPECT(rauzy_run_cloud(m, "{not json", "capi_out", &summary, &artifacts) == RAUZY_INVALID_ARGUMENT);

  rauzy_cloud_free(a);
  rauzy_cloud_free(b);
  rauzy_cloud_free(e);
  rauzy_cloud_free(g);
  rauzy_cloud_free(c);
  rauzy_model_free(m);
  rauzy_substitution_free(s);
}

static void test_family(void) {
  rauzy_family* f = NULL;
  EXPECT(rauzy_family_load(fixture("fib_family.toml"), &f) == RAUZY_OK);
  char* summary = NULL;
  EXPECT(rauzy_run_sadic(f, "{\"directive\": \"(0,1)*\", \"depth\": 12}", "capi_out", &summary, NULL) == RAUZY_OK);
  EXPECT(summary != NULL && strstr(summary, "\"adapted_letters\"") != NULL);
  rauzy_string_free(summary);
  EXPECT(rauzy_run_sadic(f, "{\"directive\": \"(0,5)*\"}", "capi_out", NULL, NULL) == RAUZY_VALIDATION);
  rauzy_family_free(f);
}

int main(void) {
  EXPECT(strlen(rauzy_version()) > 0);
  test_errors();
  test_flow();
  test_family();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("C API: all checks passed\n");
  return 0;
}
