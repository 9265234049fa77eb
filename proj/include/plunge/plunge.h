#ifndef PLUNGE_PLUNGE_H
#define PLUNGE_PLUNGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define PLG_API __declspec(dllexport)
#else
#  define PLG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum plg_status {
  PLG_OK = 0,
  PLG_INVALID_ARGUMENT = 1,
  PLG_PRECONDITION = 2,
  PLG_CAP_EXCEEDED = 3,
  PLG_NUMERICAL = 4,
  PLG_UNSUPPORTED = 5,
  PLG_IO = 6,
  PLG_INTERNAL = 7
} plg_status;

typedef struct plg_domain plg_domain;
typedef struct plg_gridset plg_gridset;
typedef struct plg_spectrum plg_spectrum;

/* Message of the last failing call on this thread; never NULL. */
PLG_API const char* plg_last_error(void);
PLG_API const char* plg_status_name(plg_status s);
PLG_API const char* plg_version(void);
/* Releases strings returned through char** out-parameters. */
PLG_API void plg_string_free(char* s);

/* Domains: textual specs such as "ball(3)", "box(1,2)", "union(box(1);shift(box(1),3,0))". */
PLG_API plg_status plg_domain_parse(const char* spec, int default_dim, plg_domain** out);
PLG_API plg_status plg_domain_catalog(const char* name, const double* params, size_t n, int d, plg_domain** out);
PLG_API void plg_domain_free(plg_domain* dom);
PLG_API int plg_domain_dim(const plg_domain* dom);
PLG_API int plg_domain_contains(const plg_domain* dom, const double* x);
/* JSON with volume, boundary measure and Ahlfors estimate at the given raster step (0 picks one). */
PLG_API plg_status plg_domain_info(const plg_domain* dom, double h, char** json);

/* Lattice sets Omega = E intersected with L^{-1} Z^d, stored as integer vectors. */
PLG_API plg_status plg_discretize(const plg_domain* dom, double L, plg_gridset** out);
PLG_API void plg_gridset_free(plg_gridset* g);
PLG_API size_t plg_gridset_size(const plg_gridset* g);
PLG_API int plg_gridset_dim(const plg_gridset* g);
PLG_API double plg_gridset_resolution(const plg_gridset* g);
PLG_API plg_status plg_gridset_point(const plg_gridset* g, size_t i, int64_t* k);
PLG_API plg_status plg_gridset_boundary(const plg_gridset* g, plg_gridset** out);
PLG_API plg_status plg_gridset_regularity(const plg_gridset* g, double* eta, double* kappa);

/* Spectrum of the concentration matrix of (omega, F). parity != 0 allows reflection blocks above cap. */
PLG_API plg_status plg_spectrum_compute(const plg_gridset* omega, const plg_domain* F, size_t cap, int parity,
                                        plg_spectrum** out);
PLG_API void plg_spectrum_free(plg_spectrum* s);
PLG_API size_t plg_spectrum_size(const plg_spectrum* s);
PLG_API plg_status plg_spectrum_values(const plg_spectrum* s, double* out, size_t n);
PLG_API double plg_spectrum_trace(const plg_spectrum* s);
PLG_API double plg_spectrum_trace_residual(const plg_spectrum* s);
PLG_API plg_status plg_spectrum_counts(const plg_spectrum* s, double eps, long* plunge, long* distribution);
/* Exact spectral inequalities; *report is empty when all hold. */
PLG_API plg_status plg_spectrum_audit(const plg_spectrum* s, char** report);
PLG_API plg_status plg_spectrum_csv(const plg_spectrum* s, char** csv);
PLG_API plg_status plg_spectrum_json(const plg_spectrum* s, const double* eps, size_t n_eps, char** json);

PLG_API plg_status plg_matrix_csv(const plg_gridset* omega, const plg_domain* F, size_t cap, char** csv);
PLG_API plg_status plg_nystrom(const plg_gridset* omega, const plg_domain* F, int grid_n, double* out, size_t n);

typedef struct plg_bound_inputs {
  const char* variant; /* "th1", "th2", "th3", "th-cube" */
  int d;
  double bE, kE, bF, kF;
  double eta, W_max;
  double eps, alpha, A;
  int extra_log;
} plg_bound_inputs;

typedef struct plg_bound_result {
  double value; /* NaN when a hypothesis fails */
  int product_ok, eps_ok, alpha_ok;
} plg_bound_result;

PLG_API void plg_bound_defaults(plg_bound_inputs* in);
PLG_API plg_status plg_bound(const plg_bound_inputs* in, plg_bound_result* out);
/* NaN on invalid input; see plg_last_error. */
PLG_API double plg_landau_widom(double ab, double eps, double c);

/* model: "power_law", "log_linear" or "ratio". */
PLG_API plg_status plg_fit(const double* x, const double* y, size_t n, const char* model, char** json);

/* Frame checks on the centred box with sides W. */
PLG_API plg_status plg_frame_residual(const double* W, int d, double delta, double alpha, size_t count, uint64_t seed,
                                      char** json);
PLG_API plg_status plg_israel(const plg_gridset* omega, const double* W, double s, double delta, double eps,
                              double alpha, char** json);

/* Sweep from a JSON config; either output may be NULL. */
PLG_API plg_status plg_sweep(const char* config_json, int timestamp, char** csv, char** json);
PLG_API plg_status plg_converge(const plg_domain* E, const plg_domain* F, const double* L, size_t n_L, size_t k,
                                size_t cap, char** json);

/* Constants file path, honouring PLUNGE_CONSTANTS. */
PLG_API plg_status plg_constants_path(char** path);

#ifdef __cplusplus
}
#endif

#endif
