#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "plunge/plunge.h"

static int failures = 0;

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                \
    }                                                            \
  } while (0)

#define CHECK_OK(call) CHECK((call) == PLG_OK)

static void domains(void) {
  plg_domain* d = NULL;
  CHECK_OK(plg_domain_parse("ball(3)", 2, &d));
  CHECK(plg_domain_dim(d) == 2);
  double x[2] = {1.0, 2.0}, y[2] = {3.0, 1.0};
  CHECK(plg_domain_contains(d, x) == 1);
  CHECK(plg_domain_contains(d, y) == 0);
  char* info = NULL;
  CHECK_OK(plg_domain_info(d, 0.0, &info));
  CHECK(info && strstr(info, "boundary_measure"));
  plg_string_free(info);
  plg_domain_free(d);

  d = NULL;
  CHECK(plg_domain_parse("hexagon(2)", 2, &d) == PLG_INVALID_ARGUMENT);
  CHECK(d == NULL);
  CHECK(strlen(plg_last_error()) > 0);

  const double p[2] = {4.0, 1.0};
  CHECK_OK(plg_domain_catalog("squareminusdisk", p, 2, 2, &d));
  plg_domain_free(d);
  CHECK(plg_domain_catalog("ball", p, 2, 2, &d) == PLG_INVALID_ARGUMENT);
  CHECK(plg_domain_parse(NULL, 2, &d) == PLG_INVALID_ARGUMENT);
}

static void gridsets(void) {
  plg_domain* d = NULL;
  plg_gridset *g = NULL, *b = NULL;
  CHECK_OK(plg_domain_parse("ball(2.5)", 2, &d));
  CHECK_OK(plg_discretize(d, 1.0, &g));
  CHECK(plg_gridset_size(g) == 21);
  CHECK(plg_gridset_dim(g) == 2);
  CHECK(plg_gridset_resolution(g) == 1.0);
  int64_t k[2];
  CHECK_OK(plg_gridset_point(g, 0, k));
  CHECK(k[0] * k[0] + k[1] * k[1] <= 6);
  CHECK(plg_gridset_point(g, 21, k) == PLG_INVALID_ARGUMENT);
  CHECK_OK(plg_gridset_boundary(g, &b));
  CHECK(plg_gridset_size(b) > 0 && plg_gridset_size(b) < 21);
  double eta = 0, kappa = 0;
  CHECK_OK(plg_gridset_regularity(b, &eta, &kappa));
  CHECK(kappa > 0 && kappa <= 1);
  CHECK(plg_discretize(d, -1.0, &g) == PLG_INVALID_ARGUMENT);
  plg_gridset_free(b);
  plg_gridset_free(g);
  plg_domain_free(d);
}

static void spectra(void) {
  plg_domain *E = NULL, *F = NULL;
  plg_gridset* g = NULL;
  plg_spectrum* s = NULL;
  CHECK_OK(plg_domain_parse("box(1)", 1, &E));
  CHECK_OK(plg_domain_parse("shift(box(0.5),0.25)", 1, &F));
  CHECK_OK(plg_discretize(E, 1.0, &g));
  CHECK(plg_gridset_size(g) == 1);
  plg_domain_free(E);
  CHECK_OK(plg_domain_parse("box(2)", 1, &E));
  plg_gridset_free(g);
  CHECK_OK(plg_discretize(E, 1.0, &g));
  CHECK(plg_gridset_size(g) == 3);

  CHECK_OK(plg_spectrum_compute(g, F, 100, 1, &s));
  CHECK(plg_spectrum_size(s) == 3);
  double v[3];
  CHECK_OK(plg_spectrum_values(s, v, 3));
  CHECK(v[0] >= v[1] && v[1] >= v[2]);
  CHECK(fabs(plg_spectrum_trace(s) - 1.5) < 1e-12);
  CHECK(plg_spectrum_trace_residual(s) >= 0);
  long plunge = -1, dist = -1;
  CHECK_OK(plg_spectrum_counts(s, 0.1, &plunge, &dist));
  CHECK(plunge >= 0 && dist >= plunge);
  CHECK(plg_spectrum_counts(s, 0.7, &plunge, &dist) == PLG_INVALID_ARGUMENT);
  char* text = NULL;
  CHECK_OK(plg_spectrum_audit(s, &text));
  CHECK(text && text[0] == '\0');
  plg_string_free(text);
  CHECK_OK(plg_spectrum_csv(s, &text));
  CHECK(strncmp(text, "index,lambda", 12) == 0);
  plg_string_free(text);
  const double eps[2] = {0.1, 0.01};
  CHECK_OK(plg_spectrum_json(s, eps, 2, &text));
  CHECK(strstr(text, "transition") != NULL);
  plg_string_free(text);
  CHECK_OK(plg_matrix_csv(g, F, 100, &text));
  plg_string_free(text);
  double ny[3];
  CHECK_OK(plg_nystrom(g, F, 256, ny, 3));
  CHECK(fabs(ny[0] - v[0]) < 1e-2);

  plg_spectrum* capped = NULL;
  CHECK(plg_spectrum_compute(g, F, 2, 0, &capped) == PLG_CAP_EXCEEDED);
  plg_spectrum_free(s);

  plg_domain* big = NULL;
  CHECK_OK(plg_domain_parse("box(3)", 1, &big));
  CHECK(plg_spectrum_compute(g, big, 100, 1, &s) == PLG_PRECONDITION);
  plg_domain_free(big);
  plg_gridset_free(g);
  plg_domain_free(E);
  plg_domain_free(F);
}

static void bounds(void) {
  plg_bound_inputs in;
  plg_bound_defaults(&in);
  in.variant = "th3";
  in.d = 2;
  in.bE = 8;
  in.kE = 0.5;
  in.bF = 4;
  in.kF = 1;
  in.eps = 0.01;
  in.alpha = 0.25;
  in.A = 1;
  in.extra_log = 1;
  plg_bound_result r;
  CHECK_OK(plg_bound(&in, &r));
  CHECK(fabs(r.value / (64.0 * pow(log(6400.0), 6)) - 1) < 1e-12);
  CHECK(r.product_ok && r.eps_ok && r.alpha_ok);
  in.eps = 0.6;
  CHECK_OK(plg_bound(&in, &r));
  CHECK(isnan(r.value) && !r.eps_ok);
  in.variant = "nope";
  CHECK(plg_bound(&in, &r) == PLG_INVALID_ARGUMENT);
  CHECK(fabs(plg_landau_widom(exp(1.0), 1.0 / (1.0 + exp(1.0)), 1.0) - 1.0) < 1e-12);
  CHECK(isnan(plg_landau_widom(0.5, 0.1, 1.0)));

  const double x[4] = {1, 2, 4, 8}, y[4] = {3, 6, 12, 24};
  char* json = NULL;
  CHECK_OK(plg_fit(x, y, 4, "power_law", &json));
  CHECK(strstr(json, "r2") != NULL);
  plg_string_free(json);
  CHECK(plg_fit(x, y, 3, "power_law", &json) == PLG_PRECONDITION);
  CHECK(plg_fit(x, y, 4, "cubic", &json) == PLG_INVALID_ARGUMENT);
}

static void frames_and_sweeps(void) {
  const double W[1] = {2.0};
  char* json = NULL;
  CHECK_OK(plg_frame_residual(W, 1, 1e-4, 0.25, 4, 3, &json));
  CHECK(strstr(json, "residual") != NULL);
  plg_string_free(json);
  CHECK(plg_frame_residual(W, 1, 1.5, 0.25, 4, 3, &json) == PLG_INVALID_ARGUMENT);

  plg_domain* E = NULL;
  plg_gridset* g = NULL;
  CHECK_OK(plg_domain_parse("box(16)", 1, &E));
  CHECK_OK(plg_discretize(E, 32, &g));
  const double W4[1] = {4.0};
  CHECK_OK(plg_israel(g, W4, 8, 1e-3, 0.3, 0.25, &json));
  CHECK(strstr(json, "\"holds\": true") != NULL);
  plg_string_free(json);
  plg_gridset_free(g);

  plg_domain* F = NULL;
  CHECK_OK(plg_domain_parse("box(1)", 1, &F));
  plg_domain_free(E);
  CHECK_OK(plg_domain_parse("box(8)", 1, &E));
  const double L[2] = {8, 16};
  CHECK_OK(plg_converge(E, F, L, 2, 5, 6000, &json));
  CHECK(strstr(json, "diffs") != NULL);
  plg_string_free(json);
  plg_domain_free(E);
  plg_domain_free(F);

  char *csv = NULL, *out = NULL;
  CHECK_OK(plg_sweep("{\"E\":[\"box(2,2)\"],\"F\":[\"box(1,1)\"],\"L\":[1],\"eps\":[0.1]}", 0, &csv, &out));
  CHECK(strncmp(csv, "# plunge sweep csv v1", 21) == 0);
  CHECK(strstr(out, "\"records\"") != NULL);
  plg_string_free(csv);
  plg_string_free(out);
  CHECK(plg_sweep("{\"E\":[\"box(2,2)\"],\"F\":[\"box(1,1)\"],\"L\":[1],\"eps\":[]}", 0, &csv, NULL) ==
        PLG_INVALID_ARGUMENT);

  char* path = NULL;
  CHECK_OK(plg_constants_path(&path));
  CHECK(path && strlen(path) > 0);
  plg_string_free(path);
}

int main(void) {
  CHECK(strcmp(plg_status_name(PLG_CAP_EXCEEDED), "") != 0);
  CHECK(strlen(plg_version()) > 0);
  domains();
  gridsets();
  spectra();
  bounds();
  frames_and_sweeps();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
