// extern "C" surface: opaque handles, status codes, no exceptions across the
// boundary. Every entry point funnels through guarded() which records the
// failure message for spdml_last_error().
#include "spdml/spdml.h"

#include <Eigen/Dense>
#include <cstring>
#include <exception>
#include <functional>
#include <new>
#include <string>
#include <vector>

#include "core/affinity.hpp"
#include "core/checks.hpp"
#include "core/descriptors.hpp"
#include "core/model_io.hpp"
#include "core/objective.hpp"
#include "core/pipeline.hpp"
#include "core/spd.hpp"
#include "core/types.hpp"

struct spdml_dataset {
  Eigen::Index dim = 0;
  std::vector<spdml::SpdMatrix> matrices;
  std::vector<int> labels;
};

struct spdml_model {
  spdml::SpdMlModel model;
};

namespace {

thread_local std::string g_last_error;

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>;

spdml_status map_code(spdml::ErrorCode code) {
  using spdml::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArg: return SPDML_ERR_INVALID_ARG;
    case ErrorCode::NotSquare: return SPDML_ERR_NOT_SQUARE;
    case ErrorCode::NotSymmetric: return SPDML_ERR_NOT_SYMMETRIC;
    case ErrorCode::NotPositiveDefinite:
      return SPDML_ERR_NOT_POSITIVE_DEFINITE;
    case ErrorCode::DimMismatch: return SPDML_ERR_DIM_MISMATCH;
    case ErrorCode::BaseMismatch: return SPDML_ERR_BASE_MISMATCH;
    case ErrorCode::RankDeficient: return SPDML_ERR_RANK_DEFICIENT;
    case ErrorCode::EmptyList: return SPDML_ERR_EMPTY_LIST;
    case ErrorCode::SingularProjectedMatrix:
      return SPDML_ERR_SINGULAR_PROJECTION;
    case ErrorCode::InvalidParams: return SPDML_ERR_INVALID_PARAMS;
    case ErrorCode::FoldTooSmall: return SPDML_ERR_FOLD_TOO_SMALL;
    case ErrorCode::Io: return SPDML_ERR_IO;
    case ErrorCode::Parse: return SPDML_ERR_PARSE;
    case ErrorCode::NumericalFailure: return SPDML_ERR_NUMERICAL;
  }
  return SPDML_ERR_UNKNOWN;
}

spdml_status guarded(const std::function<spdml_status()>& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const spdml::Error& error) {
    g_last_error = error.what();
    return map_code(error.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SPDML_ERR_UNKNOWN;
  } catch (const std::exception& error) {
    g_last_error = error.what();
    return SPDML_ERR_UNKNOWN;
  }
}

spdml_status fail_invalid(const char* message) {
  g_last_error = message;
  return SPDML_ERR_INVALID_ARG;
}

Eigen::MatrixXd from_row_major(const double* data, Eigen::Index rows,
                               Eigen::Index cols) {
  return RowMajorMap(data, rows, cols);
}

void to_row_major(const Eigen::MatrixXd& m, double* out) {
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>>(out, m.rows(), m.cols()) = m;
}

bool valid_metric(spdml_metric metric) {
  return metric == SPDML_METRIC_AIRM || metric == SPDML_METRIC_STEIN;
}

spdml::Metric to_metric(spdml_metric metric) {
  return metric == SPDML_METRIC_AIRM ? spdml::Metric::Airm
                                     : spdml::Metric::Stein;
}

spdml::FitOptions to_fit_options(const spdml_train_options& opts) {
  spdml::FitOptions fit;
  fit.metric = to_metric(opts.metric);
  fit.m = opts.m;
  fit.nu_w = opts.nu_w;
  fit.nu_b = opts.nu_b;
  fit.seed = opts.seed;
  fit.cg.max_iters = opts.max_iters;
  fit.cg.grad_tol = opts.grad_tol;
  fit.cg.cost_tol = opts.cost_tol;
  fit.cg.max_step = opts.max_step;
  fit.cg.restart_every = opts.restart_every;
  fit.cg.line_search = opts.line_search == SPDML_LINE_SEARCH_BACKTRACKING
                           ? spdml::LineSearchKind::Backtracking
                           : spdml::LineSearchKind::Golden;
  return fit;
}

spdml::LabeledSpdDataset to_core_dataset(const spdml_dataset& ds) {
  return spdml::LabeledSpdDataset::make(ds.matrices, ds.labels);
}

}  // namespace

extern "C" {

void spdml_train_options_init(spdml_train_options* opts) {
  if (!opts) return;
  opts->metric = SPDML_METRIC_AIRM;
  opts->m = 0;
  opts->nu_w = 0;
  opts->nu_b = 1;
  opts->max_iters = 200;
  opts->grad_tol = 0.0;
  opts->cost_tol = 1e-9;
  opts->max_step = 1.0;
  opts->restart_every = 0;
  opts->line_search = SPDML_LINE_SEARCH_GOLDEN;
  opts->seed = 0;
}

const char* spdml_version(void) { return "1.0.0"; }

const char* spdml_last_error(void) { return g_last_error.c_str(); }

const char* spdml_status_name(spdml_status status) {
  switch (status) {
    case SPDML_OK: return "Ok";
    case SPDML_ERR_INVALID_ARG: return "InvalidArg";
    case SPDML_ERR_NOT_SQUARE: return "NotSquare";
    case SPDML_ERR_NOT_SYMMETRIC: return "NotSymmetric";
    case SPDML_ERR_NOT_POSITIVE_DEFINITE: return "NotPositiveDefinite";
    case SPDML_ERR_DIM_MISMATCH: return "DimMismatch";
    case SPDML_ERR_BASE_MISMATCH: return "BaseMismatch";
    case SPDML_ERR_RANK_DEFICIENT: return "RankDeficient";
    case SPDML_ERR_EMPTY_LIST: return "EmptyList";
    case SPDML_ERR_SINGULAR_PROJECTION: return "SingularProjectedMatrix";
    case SPDML_ERR_INVALID_PARAMS: return "InvalidParams";
    case SPDML_ERR_FOLD_TOO_SMALL: return "FoldTooSmall";
    case SPDML_ERR_IO: return "Io";
    case SPDML_ERR_PARSE: return "Parse";
    case SPDML_ERR_NUMERICAL: return "NumericalFailure";
    case SPDML_ERR_CHECK_FAILED: return "CheckFailed";
    case SPDML_ERR_UNKNOWN: break;
  }
  return "Unknown";
}

spdml_status spdml_dataset_create(int dim, spdml_dataset** out) {
  if (!out) return fail_invalid("out pointer is null");
  if (dim < 1) return fail_invalid("dataset dimension must be positive");
  return guarded([&] {
    auto* ds = new spdml_dataset;
    ds->dim = dim;
    *out = ds;
    return SPDML_OK;
  });
}

void spdml_dataset_destroy(spdml_dataset* ds) { delete ds; }

spdml_status spdml_dataset_add(spdml_dataset* ds, const double* x, int label) {
  if (!ds || !x) return fail_invalid("dataset and matrix must be non-null");
  return guarded([&] {
    ds->matrices.push_back(
        spdml::SpdMatrix::make(from_row_major(x, ds->dim, ds->dim)));
    ds->labels.push_back(label);
    return SPDML_OK;
  });
}

int spdml_dataset_size(const spdml_dataset* ds) {
  return ds ? static_cast<int>(ds->matrices.size()) : 0;
}

int spdml_dataset_dim(const spdml_dataset* ds) {
  return ds ? static_cast<int>(ds->dim) : 0;
}

spdml_status spdml_dataset_label(const spdml_dataset* ds, int index,
                                 int* out_label) {
  if (!ds || !out_label) return fail_invalid("dataset and out must be non-null");
  if (index < 0 || index >= spdml_dataset_size(ds))
    return fail_invalid("sample index out of range");
  *out_label = ds->labels[index];
  return SPDML_OK;
}

spdml_status spdml_dataset_matrix(const spdml_dataset* ds, int index,
                                  double* out) {
  if (!ds || !out) return fail_invalid("dataset and out must be non-null");
  if (index < 0 || index >= spdml_dataset_size(ds))
    return fail_invalid("sample index out of range");
  to_row_major(ds->matrices[index].matrix(), out);
  return SPDML_OK;
}

spdml_status spdml_synth_dataset(int n, int m_true, int classes, int per_class,
                                 double noise, uint64_t seed,
                                 spdml_dataset** out) {
  if (!out) return fail_invalid("out pointer is null");
  return guarded([&] {
    const spdml::PlantedDataset planted =
        spdml::make_planted_dataset(n, m_true, classes, per_class, noise, seed);
    auto* ds = new spdml_dataset;
    ds->dim = planted.data.dim();
    for (Eigen::Index i = 0; i < planted.data.size(); ++i) {
      ds->matrices.push_back(planted.data.matrix(i));
      ds->labels.push_back(planted.data.label(i));
    }
    *out = ds;
    return SPDML_OK;
  });
}

spdml_status spdml_airm_dist_sq(int n, const double* x, const double* y,
                                double* out) {
  if (!x || !y || !out) return fail_invalid("arguments must be non-null");
  if (n < 1) return fail_invalid("dimension must be positive");
  return guarded([&] {
    *out = spdml::airm_dist_sq(spdml::SpdMatrix::make(from_row_major(x, n, n)),
                               spdml::SpdMatrix::make(from_row_major(y, n, n)));
    return SPDML_OK;
  });
}

spdml_status spdml_stein_dist_sq(int n, const double* x, const double* y,
                                 double* out) {
  if (!x || !y || !out) return fail_invalid("arguments must be non-null");
  if (n < 1) return fail_invalid("dimension must be positive");
  return guarded([&] {
    *out =
        spdml::stein_dist_sq(spdml::SpdMatrix::make(from_row_major(x, n, n)),
                             spdml::SpdMatrix::make(from_row_major(y, n, n)));
    return SPDML_OK;
  });
}

spdml_status spdml_rcm(int n_features, int n_obs, const double* obs,
                       double* out) {
  if (!obs || !out) return fail_invalid("arguments must be non-null");
  if (n_features < 1 || n_obs < 1)
    return fail_invalid("observation matrix sizes must be positive");
  return guarded([&] {
    const auto matrix = spdml::rcm(spdml::ObservationMatrix::make(
        from_row_major(obs, n_features, n_obs)));
    to_row_major(matrix.matrix(), out);
    return SPDML_OK;
  });
}

spdml_status spdml_rcm_projected(int n_features, int m, int n_obs,
                                 const double* obs, const double* w,
                                 double* out) {
  if (!obs || !w || !out) return fail_invalid("arguments must be non-null");
  if (n_features < 1 || m < 1 || n_obs < 1)
    return fail_invalid("sizes must be positive");
  return guarded([&] {
    const auto matrix = spdml::rcm_projected(
        spdml::ObservationMatrix::make(from_row_major(obs, n_features, n_obs)),
        spdml::Projection::make(from_row_major(w, n_features, m)));
    to_row_major(matrix.matrix(), out);
    return SPDML_OK;
  });
}

spdml_status spdml_block_diag(int count, const int* dims,
                              const double* const* blocks, double* out) {
  if (!dims || !blocks || !out) return fail_invalid("arguments must be non-null");
  if (count < 0) return fail_invalid("count must be non-negative");
  return guarded([&] {
    std::vector<spdml::SpdMatrix> parts;
    parts.reserve(count);
    for (int k = 0; k < count; ++k) {
      if (dims[k] < 1 || !blocks[k])
        return fail_invalid("each block must be non-null with positive size");
      parts.push_back(
          spdml::SpdMatrix::make(from_row_major(blocks[k], dims[k], dims[k])));
    }
    const auto whole = spdml::block_diag_concat(parts);
    to_row_major(whole.matrix(), out);
    return SPDML_OK;
  });
}

spdml_status spdml_fit(const spdml_dataset* ds,
                       const spdml_train_options* opts,
                       spdml_trace_callback trace_cb, void* trace_user,
                       spdml_warn_callback warn_cb, void* warn_user,
                       spdml_model** out_model) {
  if (!ds || !opts || !out_model)
    return fail_invalid("dataset, options and out pointer must be non-null");
  if (!valid_metric(opts->metric)) return fail_invalid("unknown metric value");
  return guarded([&] {
    spdml::WarnFn warn;
    if (warn_cb)
      warn = [&](const std::string& message) {
        warn_cb(warn_user, message.c_str());
      };
    spdml::TraceFn trace;
    if (trace_cb)
      trace = [&](const spdml::TraceRecord& r) {
        trace_cb(trace_user, r.iteration, r.cost, r.grad_norm, r.step);
      };
    auto model = spdml::fit(to_core_dataset(*ds), to_fit_options(*opts), warn,
                            trace);
    *out_model = new spdml_model{std::move(model)};
    return SPDML_OK;
  });
}

void spdml_model_destroy(spdml_model* model) { delete model; }

spdml_status spdml_model_info(const spdml_model* model, int* n, int* m,
                              spdml_metric* metric, int* nu_w, int* nu_b) {
  if (!model) return fail_invalid("model is null");
  if (n) *n = static_cast<int>(model->model.w.ambient_dim());
  if (m) *m = static_cast<int>(model->model.w.subspace_dim());
  if (metric)
    *metric = model->model.metric == spdml::Metric::Airm ? SPDML_METRIC_AIRM
                                                         : SPDML_METRIC_STEIN;
  if (nu_w) *nu_w = model->model.nu_w;
  if (nu_b) *nu_b = model->model.nu_b;
  return SPDML_OK;
}

spdml_status spdml_model_projection(const spdml_model* model, double* out) {
  if (!model || !out) return fail_invalid("model and out must be non-null");
  to_row_major(model->model.w.matrix(), out);
  return SPDML_OK;
}

spdml_status spdml_model_transform(const spdml_model* model, const double* x,
                                   double* out) {
  if (!model || !x || !out)
    return fail_invalid("model, matrix and out must be non-null");
  return guarded([&] {
    const Eigen::Index n = model->model.w.ambient_dim();
    const auto mapped = spdml::transform(
        model->model, spdml::SpdMatrix::make(from_row_major(x, n, n)));
    to_row_major(mapped.matrix(), out);
    return SPDML_OK;
  });
}

spdml_status spdml_model_save(const spdml_model* model, const char* path) {
  if (!model || !path) return fail_invalid("model and path must be non-null");
  return guarded([&] {
    spdml::save_model(model->model, path);
    return SPDML_OK;
  });
}

spdml_status spdml_model_load(const char* path, spdml_model** out) {
  if (!path || !out) return fail_invalid("path and out must be non-null");
  return guarded([&] {
    *out = new spdml_model{spdml::load_model(path)};
    return SPDML_OK;
  });
}

spdml_status spdml_nn_classify(const spdml_dataset* train, const double* query,
                               spdml_metric metric, int* out_label) {
  if (!train || !query || !out_label)
    return fail_invalid("train set, query and out must be non-null");
  if (!valid_metric(metric)) return fail_invalid("unknown metric value");
  return guarded([&] {
    *out_label = spdml::nn_classify(
        to_core_dataset(*train),
        spdml::SpdMatrix::make(from_row_major(query, train->dim, train->dim)),
        to_metric(metric));
    return SPDML_OK;
  });
}

spdml_status spdml_cross_validate(const spdml_dataset* ds, int folds,
                                  const int* m_grid, int m_count,
                                  const int* nu_b_grid, int nu_b_count,
                                  const spdml_train_options* opts,
                                  double* fold_acc, int* best_m,
                                  int* best_nu_b) {
  if (!ds || !m_grid || !nu_b_grid || !opts || !best_m || !best_nu_b)
    return fail_invalid("grids, options and out pointers must be non-null");
  if (m_count < 1 || nu_b_count < 1)
    return fail_invalid("grids must be non-empty");
  if (!valid_metric(opts->metric)) return fail_invalid("unknown metric value");
  return guarded([&] {
    spdml::CvPlan plan;
    plan.folds = folds;
    plan.m_grid.assign(m_grid, m_grid + m_count);
    plan.nu_b_grid.assign(nu_b_grid, nu_b_grid + nu_b_count);
    const auto result = spdml::cross_validate(to_core_dataset(*ds), plan,
                                              to_fit_options(*opts));
    if (fold_acc) {
      std::size_t at = 0;
      for (int mi = 0; mi < m_count; ++mi)
        for (int bi = 0; bi < nu_b_count; ++bi)
          for (int f = 0; f < folds; ++f)
            fold_acc[at++] = result.accuracies[mi][bi][f];
    }
    *best_m = result.best_m;
    *best_nu_b = result.best_nu_b;
    return SPDML_OK;
  });
}

spdml_status spdml_run_checks(uint64_t seed, spdml_check_callback cb,
                              void* user) {
  return guarded([&] {
    const auto results = spdml::run_verification_suite(seed);
    bool all_pass = true;
    for (const auto& r : results) {
      if (cb) cb(user, r.name.c_str(), r.measured, r.threshold, r.pass ? 1 : 0);
      all_pass = all_pass && r.pass;
    }
    if (!all_pass) {
      g_last_error = "one or more self checks failed";
      return SPDML_ERR_CHECK_FAILED;
    }
    return SPDML_OK;
  });
}

}  // extern "C"
