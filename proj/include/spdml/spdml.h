/* spdml.h - C interface to the SPD manifold learning library.
 *
 * The library learns an orthonormal projection W (n x m, m < n) that maps
 * symmetric positive definite matrices to a lower-dimensional SPD manifold
 * while preserving class structure, and provides the surrounding machinery:
 * SPD metrics, region covariance descriptors, nearest-neighbour
 * classification, cross-validation and a synthetic data generator.
 *
 * Conventions:
 *   - All matrix buffers are row-major double arrays owned by the caller.
 *   - Functions returning spdml_status never throw and never abort; on
 *     failure the out-parameters are left untouched and a human-readable
 *     message is available from spdml_last_error() on the same thread.
 *   - Handles (spdml_dataset, spdml_model) are created and destroyed by the
 *     library; destroy functions accept NULL.
 */
#ifndef SPDML_H
#define SPDML_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SPDML_API __declspec(dllexport)
#else
#define SPDML_API __attribute__((visibility("default")))
#endif

typedef enum spdml_status {
  SPDML_OK = 0,
  SPDML_ERR_INVALID_ARG = 1,          /* null pointer or nonsensical size */
  SPDML_ERR_NOT_SQUARE = 2,
  SPDML_ERR_NOT_SYMMETRIC = 3,
  SPDML_ERR_NOT_POSITIVE_DEFINITE = 4,
  SPDML_ERR_DIM_MISMATCH = 5,
  SPDML_ERR_BASE_MISMATCH = 6,
  SPDML_ERR_RANK_DEFICIENT = 7,
  SPDML_ERR_EMPTY_LIST = 8,
  SPDML_ERR_SINGULAR_PROJECTION = 9,  /* projected matrix numerically singular */
  SPDML_ERR_INVALID_PARAMS = 10,
  SPDML_ERR_FOLD_TOO_SMALL = 11,
  SPDML_ERR_IO = 12,
  SPDML_ERR_PARSE = 13,
  SPDML_ERR_NUMERICAL = 14,           /* eigensolver or factorisation breakdown */
  SPDML_ERR_CHECK_FAILED = 15,        /* self-check measured value above threshold */
  SPDML_ERR_UNKNOWN = 16
} spdml_status;

typedef enum spdml_metric {
  SPDML_METRIC_AIRM = 0,   /* affine invariant Riemannian metric */
  SPDML_METRIC_STEIN = 1   /* symmetric Stein divergence */
} spdml_metric;

typedef enum spdml_line_search {
  SPDML_LINE_SEARCH_GOLDEN = 0,
  SPDML_LINE_SEARCH_BACKTRACKING = 1
} spdml_line_search;

/* Opaque handles. */
typedef struct spdml_dataset spdml_dataset;
typedef struct spdml_model spdml_model;

/* Per-iteration optimizer report: accepted cost, Riemannian gradient norm
 * and accepted step length. iteration 0 carries the initial cost. */
typedef void (*spdml_trace_callback)(void* user, int iteration, double cost,
                                     double grad_norm, double step);

/* Non-fatal warnings (e.g. a neighbour count clipped for a small class). */
typedef void (*spdml_warn_callback)(void* user, const char* message);

/* One self-check result: measured value, pass threshold, pass flag. */
typedef void (*spdml_check_callback)(void* user, const char* name,
                                     double measured, double threshold,
                                     int pass);

typedef struct spdml_train_options {
  spdml_metric metric;
  int m;                 /* target dimension, 1 <= m < n */
  int nu_w;              /* within-class neighbours; 0 = one less than the
                            smallest class size (at least 1) */
  int nu_b;              /* between-class neighbours, >= 1 */
  int max_iters;         /* conjugate gradient iteration cap */
  double grad_tol;       /* stop when gradient norm falls below; 0 = scaled
                            default of 1e-6 * sample count */
  double cost_tol;       /* relative cost decrease threshold, three
                            consecutive iterations trigger the stop */
  double max_step;       /* line search upper bound (geodesic parameter) */
  int restart_every;     /* CG restart period; 0 = m * (n - m) */
  spdml_line_search line_search;
  uint64_t seed;         /* recorded in the model for provenance */
} spdml_train_options;

/* Fill opts with the documented defaults (AIRM, auto nu_w, nu_b = 1,
 * max_iters = 200, auto tolerances, max_step = 1, golden line search). */
SPDML_API void spdml_train_options_init(spdml_train_options* opts);

SPDML_API const char* spdml_version(void);

/* Message describing the last failing call on this thread, empty if none. */
SPDML_API const char* spdml_last_error(void);

/* Short stable name of a status code, e.g. "NotPositiveDefinite". */
SPDML_API const char* spdml_status_name(spdml_status status);

/* ---- datasets ---------------------------------------------------------- */

/* Create an empty dataset of dim x dim SPD matrices with integer labels. */
SPDML_API spdml_status spdml_dataset_create(int dim, spdml_dataset** out);
SPDML_API void spdml_dataset_destroy(spdml_dataset* ds);

/* Validate and append one SPD matrix (dim x dim, row-major). Labels may be
 * any integers; they are used only for equality. */
SPDML_API spdml_status spdml_dataset_add(spdml_dataset* ds, const double* x,
                                         int label);

SPDML_API int spdml_dataset_size(const spdml_dataset* ds);
SPDML_API int spdml_dataset_dim(const spdml_dataset* ds);
SPDML_API spdml_status spdml_dataset_label(const spdml_dataset* ds, int index,
                                           int* out_label);
SPDML_API spdml_status spdml_dataset_matrix(const spdml_dataset* ds, int index,
                                            double* out /* dim*dim */);

/* Draw a labelled synthetic dataset whose class structure lives in a planted
 * m_true-dimensional subspace, with isotropic noise of the given scale.
 * classes * per_class samples of size n x n. */
SPDML_API spdml_status spdml_synth_dataset(int n, int m_true, int classes,
                                           int per_class, double noise,
                                           uint64_t seed, spdml_dataset** out);

/* ---- metrics and descriptors ------------------------------------------- */

/* Squared geodesic distance under the affine invariant metric. */
SPDML_API spdml_status spdml_airm_dist_sq(int n, const double* x,
                                          const double* y, double* out);

/* Symmetric Stein divergence. */
SPDML_API spdml_status spdml_stein_dist_sq(int n, const double* x,
                                           const double* y, double* out);

/* Region covariance of an observation matrix (n_features x n_obs, one
 * observation per column), normalised by n_obs - 1. Fails with
 * SPDML_ERR_RANK_DEFICIENT when n_obs <= n_features or the observations
 * are degenerate. */
SPDML_API spdml_status spdml_rcm(int n_features, int n_obs, const double* obs,
                                 double* out /* n_features^2 */);

/* Covariance of W^T obs for an orthonormal W (n_features x m, row-major).
 * Well defined whenever n_obs > m even if the full covariance is singular. */
SPDML_API spdml_status spdml_rcm_projected(int n_features, int m, int n_obs,
                                           const double* obs, const double* w,
                                           double* out /* m*m */);

/* Block-diagonal concatenation of SPD matrices. dims[i] is the size of
 * blocks[i]; out is (sum dims)^2. */
SPDML_API spdml_status spdml_block_diag(int count, const int* dims,
                                        const double* const* blocks,
                                        double* out);

/* ---- training and inference -------------------------------------------- */

/* Learn a projection on the dataset. Callbacks may be NULL. On success the
 * caller owns *out_model. A failed line search is reported through the trace
 * (step 0 on the final record) and the best iterate is still returned. */
SPDML_API spdml_status spdml_fit(const spdml_dataset* ds,
                                 const spdml_train_options* opts,
                                 spdml_trace_callback trace_cb,
                                 void* trace_user,
                                 spdml_warn_callback warn_cb, void* warn_user,
                                 spdml_model** out_model);

SPDML_API void spdml_model_destroy(spdml_model* model);

SPDML_API spdml_status spdml_model_info(const spdml_model* model, int* n,
                                        int* m, spdml_metric* metric,
                                        int* nu_w, int* nu_b);

/* Copy the learned projection into out (n x m, row-major). */
SPDML_API spdml_status spdml_model_projection(const spdml_model* model,
                                              double* out);

/* Map an n x n SPD matrix to its m x m image W^T X W. */
SPDML_API spdml_status spdml_model_transform(const spdml_model* model,
                                             const double* x, double* out);

/* Serialise / restore a model. Writes are atomic (temp file + rename) and
 * round-trip the projection bit-exactly. */
SPDML_API spdml_status spdml_model_save(const spdml_model* model,
                                        const char* path);
SPDML_API spdml_status spdml_model_load(const char* path, spdml_model** out);

/* Nearest neighbour label of query (dim x dim) among the dataset under the
 * given metric. Ties resolve to the lowest sample index. */
SPDML_API spdml_status spdml_nn_classify(const spdml_dataset* train,
                                         const double* query,
                                         spdml_metric metric, int* out_label);

/* Stratified k-fold cross-validation over a grid of (m, nu_b) pairs.
 * opts supplies the metric, nu_w and optimizer settings; its m and nu_b are
 * ignored. fold_acc (may be NULL) receives m_count * nu_b_count * folds
 * accuracies laid out fold-fastest. Picks the grid cell with the highest
 * mean accuracy, ties to the smaller m, then the smaller nu_b. */
SPDML_API spdml_status spdml_cross_validate(const spdml_dataset* ds, int folds,
                                            const int* m_grid, int m_count,
                                            const int* nu_b_grid,
                                            int nu_b_count,
                                            const spdml_train_options* opts,
                                            double* fold_acc, int* best_m,
                                            int* best_nu_b);

/* ---- self checks -------------------------------------------------------- */

/* Run the library's verification suite (metric identities, gradient vs
 * finite differences, geodesic and transport invariants, descriptor
 * factorisation). Reports each check through the callback and returns
 * SPDML_OK only if every check passes. */
SPDML_API spdml_status spdml_run_checks(uint64_t seed, spdml_check_callback cb,
                                        void* user);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPDML_H */
