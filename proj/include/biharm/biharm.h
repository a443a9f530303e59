#ifndef BIHARM_BIHARM_H
#define BIHARM_BIHARM_H

/* C interface to the biharmonic hypersurface toolkit.
 *
 * Every function returning bh_status leaves a message retrievable with
 * bh_last_error() (thread-local) when it fails. Strings returned through
 * char** are owned by the caller and released with bh_string_free(). */

#include <stddef.h>

#if defined(_WIN32)
#define BH_API __declspec(dllexport)
#else
#define BH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bh_status {
  BH_OK = 0,
  BH_INVALID_ARGUMENT = 1,
  BH_PARSE_ERROR = 2,
  BH_DOMAIN_ERROR = 3,
  BH_CONSTRAINT_VIOLATION = 4,
  BH_NUMERICAL_ERROR = 5,
  BH_NOT_APPLICABLE = 6,
  BH_INTERNAL_ERROR = 7
} bh_status;

typedef enum bh_classification {
  BH_MINIMAL = 0,
  BH_PROPER_BIHARMONIC = 1,
  BH_NON_BIHARMONIC = 2
} bh_classification;

typedef struct bh_chart bh_chart;
typedef struct bh_leaf bh_leaf;

BH_API const char* bh_last_error(void);
BH_API const char* bh_status_name(bh_status status);
BH_API const char* bh_classification_name(bh_classification c);
BH_API void bh_string_free(char* s);

/* Charts. family_json is a family name ("euclidean") or an object
 * {"name": ..., "params": {...}, "exprs": {...}, ...}. */
BH_API bh_status bh_chart_create(const char* family_json, bh_chart** out);
BH_API void bh_chart_destroy(bh_chart* chart);
BH_API int bh_chart_dim(const bh_chart* chart);
/* Pointer valid for the lifetime of the chart. */
BH_API bh_status bh_chart_coord_name(const bh_chart* chart, int index, const char** out);

/* Curvature at a chart point p of length dim. Matrices are row-major. */
BH_API bh_status bh_metric(const bh_chart* chart, const double* p, size_t n, double* out_nn);
BH_API bh_status bh_christoffel(const bh_chart* chart, const double* p, size_t n, double* out_nnn);
BH_API bh_status bh_riemann_lowered(const bh_chart* chart, const double* p, size_t n, double* out_nnnn);
BH_API bh_status bh_ricci(const bh_chart* chart, const double* p, size_t n, double* out_nn);
BH_API bh_status bh_scalar_curvature(const bh_chart* chart, const double* p, size_t n, double* out);

/* The slice leaf {x_slice = value}; orientation is +1 or -1. */
BH_API bh_status bh_leaf_create(const bh_chart* chart, int slice, double value, int orientation,
                                bh_leaf** out);
BH_API void bh_leaf_destroy(bh_leaf* leaf);
BH_API int bh_leaf_dim(const bh_leaf* leaf);

BH_API bh_status bh_leaf_shape(const bh_leaf* leaf, const double* u, size_t m, double* mean_curvature,
                               double* norm_a2);
BH_API bh_status bh_leaf_principal_curvatures(const bh_leaf* leaf, const double* u, size_t m, double* out_m);
/* Unnormalised residuals; tangential has m leaf components. step <= 0 picks the default. */
BH_API bh_status bh_leaf_residuals(const bh_leaf* leaf, const double* u, size_t m, double step,
                                   double* normal, double* tangential_m);
/* Classifies over a tensor grid of the leaf's sampling window. report_json may be NULL. */
BH_API bh_status bh_leaf_classify(const bh_leaf* leaf, int points_per_axis, double tol_residual,
                                  double tol_minimal, double step, bh_classification* out,
                                  char** report_json);

/* Up to three admissible principal curvatures, ascending. */
BH_API bh_status bh_umbilical_einstein(double r, int m, double* out3, size_t* count);

/* family: "conformal" (p1 = D, p2 = E), "exponent" or "sphere" (p1 = A, p2 = B). */
BH_API bh_status bh_ode_verify(const char* family, double p1, double p2, double a, double b, int steps,
                               double* max_deviation);

/* ambient_json is a built-in name ("s3", "s2xr", "h2xr", "r3") or an object
 * {"name", "tau", "ric_xi_xi", "ric_xi_x", "ric_xi_v"}. */
BH_API bh_status bh_hopf_constant_solutions(const char* ambient_json, double* out2, size_t* count);
BH_API bh_status bh_hopf_crosscheck(const char* ambient_json, double* deviation);
/* kappa_expr is a function of the arclength "s"; the grid has `points`
 * interior points of (lo, hi). */
BH_API bh_status bh_hopf_classify(const char* ambient_json, const char* kappa_expr, double lo, double hi,
                                  int points, double tol, bh_classification* out, double residuals[3]);

/* Runs a full JSON configuration. overrides_json may be NULL or an object with
 * any of tol_residual, tol_minimal, grid, step, expect. The exit code follows
 * the CLI: 0 ok, 1 unexpected classification, 2 error. output and message
 * are always set (possibly empty) on BH_OK. */
BH_API bh_status bh_run_config(const char* config_json, const char* overrides_json, char** output,
                               char** message, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
