/* ratnet — best uniform rational approximation on discrete grids, plus a
 * small rational-activation network. C interface of the shared library:
 * opaque handles, status codes, and a per-thread error message. Every
 * function that can fail returns ratnet_status; RATNET_OK means the output
 * parameters are valid. Handles are freed with the matching *_free call.
 */
#ifndef RATNET_H
#define RATNET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef RATNET_API
#if defined(RATNET_BUILD_SHARED) && defined(__GNUC__)
#define RATNET_API __attribute__((visibility("default")))
#else
#define RATNET_API
#endif
#endif

typedef enum ratnet_status {
  RATNET_OK = 0,
  RATNET_ERR_DOMAIN = 1,    /* invalid inputs or out-of-domain points */
  RATNET_ERR_POLE = 2,      /* denominator vanished during evaluation */
  RATNET_ERR_NUMERICAL = 3, /* solver stall or numerical breakdown */
  RATNET_ERR_PARSE = 4,     /* malformed file or JSON */
  RATNET_ERR_ARGUMENT = 5   /* null handle or bad buffer */
} ratnet_status;

typedef struct ratnet_samples ratnet_samples;
typedef struct ratnet_grid ratnet_grid;
typedef struct ratnet_rational ratnet_rational;
typedef struct ratnet_bary ratnet_bary;
typedef struct ratnet_mlp ratnet_mlp;
typedef struct ratnet_report ratnet_report;

/* Message for the most recent failing call on this thread. */
RATNET_API const char* ratnet_last_error(void);

/* ---------------- samples ---------------- */

/* Builtin targets: "sqrt_abs_shift", "relu" (univariate), "kdv_like"
 * (bivariate). Samples a uniform inclusive grid of n_per_dim[k] points per
 * axis over the box [lower, upper]. */
RATNET_API ratnet_status ratnet_samples_from_function(
    const char* name, const double* lower, const double* upper,
    const int* n_per_dim, int dim, ratnet_samples** out);

/* points: count*dim row-major raw coordinates. */
RATNET_API ratnet_status ratnet_samples_create(int dim, const double* points,
                                               const double* values,
                                               size_t count,
                                               const double* lower,
                                               const double* upper,
                                               ratnet_samples** out);

RATNET_API size_t ratnet_samples_count(const ratnet_samples* s);
RATNET_API int ratnet_samples_dim(const ratnet_samples* s);
RATNET_API ratnet_status ratnet_samples_get(const ratnet_samples* s, size_t i,
                                            double* point, double* value);
RATNET_API ratnet_status ratnet_samples_box(const ratnet_samples* s,
                                            double* lower, double* upper);
RATNET_API void ratnet_samples_free(ratnet_samples* s);

/* ---------------- grid datasets ---------------- */

/* Text format: line 1 dimension d, next d lines axis coordinates,
 * remaining lines row-major values. */
RATNET_API ratnet_status ratnet_grid_load(const char* path, ratnet_grid** out);
RATNET_API ratnet_status ratnet_grid_save(const ratnet_grid* g,
                                          const char* path);
RATNET_API ratnet_status ratnet_grid_from_function(const char* name,
                                                   const double* lower,
                                                   const double* upper,
                                                   const int* n_per_dim,
                                                   int dim, ratnet_grid** out);
RATNET_API int ratnet_grid_dim(const ratnet_grid* g);
RATNET_API size_t ratnet_grid_axis_size(const ratnet_grid* g, int axis);
/* Keeps every k-th point along each axis; the box is unchanged. */
RATNET_API ratnet_status ratnet_grid_subsample(const ratnet_grid* g, int k,
                                               ratnet_grid** out);
RATNET_API ratnet_status ratnet_grid_to_samples(const ratnet_grid* g,
                                                ratnet_samples** out);
RATNET_API void ratnet_grid_free(ratnet_grid* g);

/* ---------------- degrees ---------------- */

#define RATNET_MAX_DIM 8

typedef struct ratnet_degrees {
  int dim;
  int num_degree[RATNET_MAX_DIM];
  int den_degree[RATNET_MAX_DIM];
  int tensor_scheme; /* 0 = total degree (default), 1 = tensor product */
} ratnet_degrees;

RATNET_API ratnet_degrees ratnet_degrees_univariate(int num, int den);
/* Same degree pair on every axis. */
RATNET_API ratnet_degrees ratnet_degrees_uniform(int dim, int num, int den);

/* ---------------- differential correction ---------------- */

typedef struct ratnet_fit_options {
  int max_iters;  /* default 100 */
  double tol;     /* improvement stop, default 1e-10 */
} ratnet_fit_options;

RATNET_API ratnet_fit_options ratnet_fit_options_default(void);

RATNET_API ratnet_status ratnet_fit_diffcorr(const ratnet_samples* s,
                                             const ratnet_degrees* degrees,
                                             const ratnet_fit_options* opts,
                                             ratnet_rational** approx,
                                             ratnet_report** report);

/* Best (num,den) approximation to ReLU on [lo,hi] with n uniform points. */
RATNET_API ratnet_status ratnet_fit_relu_rational(int num_degree,
                                                  int den_degree, double lo,
                                                  double hi, int n_points,
                                                  ratnet_rational** approx);

/* Monomial coefficients of the cached best (3,2) approximation to ReLU on
 * [-1,1]: num4 = c0..c3, den3 = d0..d2. */
RATNET_API ratnet_status ratnet_relu_rational_coeffs(double* num4,
                                                     double* den3);

/* ---------------- bisection ---------------- */

typedef struct ratnet_bisect_options {
  double z_lo;
  double z_hi;       /* used when has_z_hi != 0, else range(f) */
  int has_z_hi;
  double z_tol;      /* default 1e-6 */
  double den_lower;  /* default 1e-2 */
  double den_upper;  /* used when has_den_upper != 0 */
  int has_den_upper;
  int max_outer;     /* default 60 */
} ratnet_bisect_options;

RATNET_API ratnet_bisect_options ratnet_bisect_options_default(void);

RATNET_API ratnet_status ratnet_fit_bisect(const ratnet_samples* s,
                                           const ratnet_degrees* degrees,
                                           const ratnet_bisect_options* opts,
                                           ratnet_rational** approx,
                                           ratnet_report** report);

/* One feasibility LP at level z; *feasible is 0/1 and *witness (optional,
 * may be NULL) receives the approximant when feasible. */
RATNET_API ratnet_status ratnet_bisect_feasible(
    const ratnet_samples* s, const ratnet_degrees* degrees, double z,
    const ratnet_bisect_options* opts, int* feasible,
    ratnet_rational** witness);

/* Column-norm ratio of the feasibility-LP error rows (conditioning proxy). */
RATNET_API ratnet_status ratnet_condition_estimate(
    const ratnet_samples* s, const ratnet_degrees* degrees, double z,
    const ratnet_bisect_options* opts, double* out);

/* ---------------- AAA ---------------- */

RATNET_API ratnet_status ratnet_fit_aaa(const ratnet_samples* s, int m_max,
                                        double rel_tol, ratnet_bary** approx,
                                        ratnet_report** report);
RATNET_API ratnet_status ratnet_bary_eval(const ratnet_bary* b, double x,
                                          double* out);
RATNET_API ratnet_status ratnet_bary_mse(const ratnet_bary* b,
                                         const ratnet_samples* s, double* out);
RATNET_API size_t ratnet_bary_size(const ratnet_bary* b);
/* Buffers of ratnet_bary_size() doubles each; any may be NULL. */
RATNET_API ratnet_status ratnet_bary_data(const ratnet_bary* b,
                                          double* support, double* values,
                                          double* weights);
RATNET_API ratnet_status ratnet_bary_to_json(const ratnet_bary* b, char** out);
RATNET_API ratnet_status ratnet_bary_from_json(const char* json,
                                               ratnet_bary** out);
RATNET_API void ratnet_bary_free(ratnet_bary* b);

/* ---------------- rational approximants ---------------- */

RATNET_API ratnet_status ratnet_rational_eval(const ratnet_rational* r,
                                              const double* point, int dim,
                                              double* out);
RATNET_API ratnet_status ratnet_rational_uniform_error(
    const ratnet_rational* r, const ratnet_samples* s, double* out);
/* JSON document {box, scheme, num_degree, den_degree, num_coeffs,
 * den_coeffs}; free with ratnet_string_free. */
RATNET_API ratnet_status ratnet_rational_to_json(const ratnet_rational* r,
                                                 char** out);
RATNET_API ratnet_status ratnet_rational_from_json(const char* json,
                                                   ratnet_rational** out);
RATNET_API void ratnet_rational_free(ratnet_rational* r);

/* ---------------- reports ---------------- */

RATNET_API double ratnet_report_error(const ratnet_report* r);
RATNET_API int ratnet_report_iterations(const ratnet_report* r);
RATNET_API double ratnet_report_wall_time(const ratnet_report* r);
RATNET_API int ratnet_report_converged(const ratnet_report* r);
RATNET_API int ratnet_report_pole_flag(const ratnet_report* r);
/* Per-iteration error history (fit) or per-epoch loss (training). */
RATNET_API size_t ratnet_report_history_size(const ratnet_report* r);
RATNET_API ratnet_status ratnet_report_history(const ratnet_report* r,
                                               double* buf, size_t cap);
/* Bisection bracket trace rows; arrays sized by trace_size, any may be
 * NULL. */
RATNET_API size_t ratnet_report_trace_size(const ratnet_report* r);
RATNET_API ratnet_status ratnet_report_trace(const ratnet_report* r,
                                             int* iteration, double* z_lo,
                                             double* z_hi, int* feasible,
                                             size_t cap);
/* Training-only fields; zero for fit reports. */
RATNET_API double ratnet_report_final_loss(const ratnet_report* r);
RATNET_API double ratnet_report_min_loss(const ratnet_report* r);
RATNET_API int ratnet_report_min_loss_epoch(const ratnet_report* r);
RATNET_API double ratnet_report_epoch_time(const ratnet_report* r);
RATNET_API void ratnet_report_free(ratnet_report* r);

/* ---------------- neural network ---------------- */

typedef enum ratnet_activation {
  RATNET_ACT_RELU = 0,
  RATNET_ACT_RATIONAL_FIXED = 1,
  RATNET_ACT_RATIONAL_LEARNABLE = 2
} ratnet_activation;

typedef struct ratnet_train_config {
  int loss;          /* 0 = mse, 1 = uniform */
  int optimizer;     /* -1 = by loss (adam for mse, adamax for uniform),
                        0 = adam, 1 = adamax */
  int mode;          /* 0 = standard, 1 = split */
  int epochs;        /* default 200 */
  double lr;         /* default 1e-2 */
  uint64_t seed;     /* default 1 */
} ratnet_train_config;

RATNET_API ratnet_train_config ratnet_train_config_default(void);

/* Seeded uniform init; rational activations start at the best (3,2)
 * approximation of ReLU. */
RATNET_API ratnet_status ratnet_mlp_init(int hidden, ratnet_activation act,
                                         uint64_t seed, ratnet_mlp** out);
RATNET_API ratnet_status ratnet_mlp_forward(const ratnet_mlp* m, double x,
                                            double* out);
/* Full-batch training; the handle's parameters are updated in place. */
RATNET_API ratnet_status ratnet_train(ratnet_mlp* m, const ratnet_samples* s,
                                      const ratnet_train_config* cfg,
                                      ratnet_report** report);
RATNET_API ratnet_status ratnet_mlp_loss(const ratnet_mlp* m,
                                         const ratnet_samples* s, int loss,
                                         double* out);
RATNET_API void ratnet_mlp_free(ratnet_mlp* m);

RATNET_API void ratnet_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* RATNET_H */
