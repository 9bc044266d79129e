// Contract tests for the C surface: only the installed header and the shared
// library, no internal headers and no Eigen.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "spdml/spdml.h"

namespace {

// Scoped temp directory so failed runs do not litter /tmp.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("spdml_capi_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

struct TraceRow {
  int iteration;
  double cost;
  double grad_norm;
  double step;
};

void record_trace(void* user, int iteration, double cost, double grad_norm,
                  double step) {
  static_cast<std::vector<TraceRow>*>(user)->push_back(
      {iteration, cost, grad_norm, step});
}

struct CheckLog {
  std::vector<std::string> names;
  int failures = 0;
};

void record_check(void* user, const char* name, double, double, int pass) {
  auto* log = static_cast<CheckLog*>(user);
  log->names.push_back(name);
  if (!pass) ++log->failures;
}

// 12-sample planted problem shared by the fit-centred cases.
spdml_dataset* make_synth() {
  spdml_dataset* ds = nullptr;
  REQUIRE(spdml_synth_dataset(8, 2, 2, 6, 0.2, 5, &ds) == SPDML_OK);
  REQUIRE(ds != nullptr);
  return ds;
}

spdml_train_options small_fit_options() {
  spdml_train_options opts;
  spdml_train_options_init(&opts);
  opts.m = 2;
  opts.nu_w = 2;
  opts.max_iters = 40;
  return opts;
}

}  // namespace

TEST_CASE("version and status names") {
  const char* version = spdml_version();
  REQUIRE(version != nullptr);
  CHECK(std::string(version).find('.') != std::string::npos);
  CHECK(std::string(spdml_status_name(SPDML_OK)) == "Ok");
  CHECK(std::string(spdml_status_name(SPDML_ERR_NOT_POSITIVE_DEFINITE)) ==
        "NotPositiveDefinite");
  CHECK(std::string(spdml_status_name(SPDML_ERR_RANK_DEFICIENT)) ==
        "RankDeficient");
  CHECK(std::string(spdml_status_name(SPDML_ERR_UNKNOWN)) == "Unknown");
}

TEST_CASE("dataset lifecycle with row-major buffers") {
  spdml_dataset* ds = nullptr;
  REQUIRE(spdml_dataset_create(2, &ds) == SPDML_OK);
  CHECK(spdml_dataset_size(ds) == 0);
  CHECK(spdml_dataset_dim(ds) == 2);

  const double first[4] = {2.0, 0.5, 0.5, 1.0};
  const double second[4] = {1.0, 0.0, 0.0, 1.0};
  REQUIRE(spdml_dataset_add(ds, first, 3) == SPDML_OK);
  REQUIRE(spdml_dataset_add(ds, second, -5) == SPDML_OK);
  CHECK(spdml_dataset_size(ds) == 2);

  int label = 0;
  REQUIRE(spdml_dataset_label(ds, 0, &label) == SPDML_OK);
  CHECK(label == 3);
  REQUIRE(spdml_dataset_label(ds, 1, &label) == SPDML_OK);
  CHECK(label == -5);

  double out[4] = {0, 0, 0, 0};
  REQUIRE(spdml_dataset_matrix(ds, 0, out) == SPDML_OK);
  for (int k = 0; k < 4; ++k) CHECK(out[k] == first[k]);

  CHECK(spdml_dataset_label(ds, 2, &label) == SPDML_ERR_INVALID_ARG);
  CHECK(spdml_dataset_label(ds, -1, &label) == SPDML_ERR_INVALID_ARG);
  spdml_dataset_destroy(ds);
  spdml_dataset_destroy(nullptr);  // destroy accepts NULL
}

TEST_CASE("invalid inputs are reported without touching outputs") {
  spdml_dataset* ds = nullptr;
  CHECK(spdml_dataset_create(0, &ds) == SPDML_ERR_INVALID_ARG);
  CHECK(spdml_dataset_create(2, nullptr) == SPDML_ERR_INVALID_ARG);
  CHECK(ds == nullptr);

  REQUIRE(spdml_dataset_create(2, &ds) == SPDML_OK);
  const double indefinite[4] = {1.0, 2.0, 2.0, 1.0};
  CHECK(spdml_dataset_add(ds, indefinite, 1) ==
        SPDML_ERR_NOT_POSITIVE_DEFINITE);
  CHECK(std::string(spdml_last_error()).size() > 0);
  CHECK(spdml_dataset_size(ds) == 0);  // the failed add left nothing behind

  CHECK(spdml_dataset_add(nullptr, indefinite, 1) == SPDML_ERR_INVALID_ARG);
  CHECK(spdml_dataset_add(ds, nullptr, 1) == SPDML_ERR_INVALID_ARG);

  // A successful call clears the sticky message.
  const double one[1] = {1.0};
  const double four[1] = {4.0};
  double value = 0.0;
  REQUIRE(spdml_airm_dist_sq(1, one, four, &value) == SPDML_OK);
  CHECK(std::string(spdml_last_error()).empty());
  spdml_dataset_destroy(ds);
}

TEST_CASE("metric values match hand calculations") {
  const double x[1] = {4.0};
  const double y[1] = {1.0};
  double airm = 0.0, stein = 0.0;
  REQUIRE(spdml_airm_dist_sq(1, x, y, &airm) == SPDML_OK);
  REQUIRE(spdml_stein_dist_sq(1, x, y, &stein) == SPDML_OK);
  const double log4 = std::log(4.0);
  CHECK(airm == doctest::Approx(log4 * log4).epsilon(1e-12));
  CHECK(stein == doctest::Approx(std::log(1.25)).epsilon(1e-12));

  const double asym[4] = {1.0, 0.5, 0.0, 1.0};
  const double eye[4] = {1.0, 0.0, 0.0, 1.0};
  double ignored = -1.0;
  CHECK(spdml_airm_dist_sq(2, asym, eye, &ignored) == SPDML_ERR_NOT_SYMMETRIC);
  CHECK(ignored == -1.0);  // failure left the output alone
  CHECK(spdml_stein_dist_sq(0, eye, eye, &ignored) == SPDML_ERR_INVALID_ARG);
  CHECK(spdml_airm_dist_sq(1, nullptr, y, &ignored) == SPDML_ERR_INVALID_ARG);
}

TEST_CASE("region covariance through the C surface") {
  // Two features, three observations, hand-worked covariance.
  const double obs[6] = {0.0, 2.0, 0.0,
                         0.0, 0.0, 2.0};
  double cov[4] = {0, 0, 0, 0};
  REQUIRE(spdml_rcm(2, 3, obs, cov) == SPDML_OK);
  CHECK(cov[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(cov[1] == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
  CHECK(cov[2] == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
  CHECK(cov[3] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

  // Too few observations for a full-rank covariance.
  const double square[9] = {1, 2, 3, 0, 0, 1, 0, 1, 0};
  double out9[9];
  CHECK(spdml_rcm(3, 3, square, out9) == SPDML_ERR_RANK_DEFICIENT);

  // The projected covariance stays well defined on the same observations.
  const double flat[9] = {1, 2, 3,
                          0, 0, 0,
                          0, 0, 0};
  const double w[3] = {1.0, 0.0, 0.0};
  double var = 0.0;
  REQUIRE(spdml_rcm_projected(3, 1, 3, flat, w, &var) == SPDML_OK);
  CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("block diagonal concatenation") {
  const double a[1] = {2.0};
  const double b[4] = {1.0, 0.0, 0.0, 1.0};
  const double* blocks[2] = {a, b};
  const int dims[2] = {1, 2};
  double out[9];
  REQUIRE(spdml_block_diag(2, dims, blocks, out) == SPDML_OK);
  const double expected[9] = {2, 0, 0, 0, 1, 0, 0, 0, 1};
  for (int k = 0; k < 9; ++k) CHECK(out[k] == expected[k]);
  CHECK(spdml_block_diag(0, dims, blocks, out) == SPDML_ERR_EMPTY_LIST);
}

TEST_CASE("train options defaults") {
  spdml_train_options opts;
  spdml_train_options_init(&opts);
  CHECK(opts.metric == SPDML_METRIC_AIRM);
  CHECK(opts.m == 0);
  CHECK(opts.nu_w == 0);
  CHECK(opts.nu_b == 1);
  CHECK(opts.max_iters == 200);
  CHECK(opts.grad_tol == 0.0);
  CHECK(opts.cost_tol == 1e-9);
  CHECK(opts.max_step == 1.0);
  CHECK(opts.restart_every == 0);
  CHECK(opts.line_search == SPDML_LINE_SEARCH_GOLDEN);
  CHECK(opts.seed == 0);
}

TEST_CASE("synthetic data, fit, transform and persistence") {
  spdml_dataset* ds = make_synth();
  CHECK(spdml_dataset_size(ds) == 12);
  CHECK(spdml_dataset_dim(ds) == 8);

  const spdml_train_options opts = small_fit_options();
  std::vector<TraceRow> trace;
  spdml_model* model = nullptr;
  REQUIRE(spdml_fit(ds, &opts, record_trace, &trace, nullptr, nullptr,
                    &model) == SPDML_OK);
  REQUIRE(model != nullptr);

  REQUIRE(trace.size() >= 2);
  CHECK(trace[0].iteration == 0);
  CHECK(trace[0].step == 0.0);
  for (std::size_t k = 1; k < trace.size(); ++k) {
    CHECK(trace[k].iteration == static_cast<int>(k));
    CHECK(trace[k].cost <= trace[k - 1].cost);
  }

  int n = 0, m = 0, nu_w = 0, nu_b = 0;
  spdml_metric metric = SPDML_METRIC_STEIN;
  REQUIRE(spdml_model_info(model, &n, &m, &metric, &nu_w, &nu_b) == SPDML_OK);
  CHECK(n == 8);
  CHECK(m == 2);
  CHECK(metric == SPDML_METRIC_AIRM);
  CHECK(nu_w == 2);
  CHECK(nu_b == 1);

  double w[16];  // 8 x 2, row-major
  REQUIRE(spdml_model_projection(model, w) == SPDML_OK);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double dot = 0.0;
      for (int r = 0; r < 8; ++r) dot += w[r * 2 + a] * w[r * 2 + b];
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-9));
    }

  // transform agrees with an explicit W^T X W.
  double x[64];
  REQUIRE(spdml_dataset_matrix(ds, 0, x) == SPDML_OK);
  double mapped[4];
  REQUIRE(spdml_model_transform(model, x, mapped) == SPDML_OK);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double sum = 0.0;
      for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
          sum += w[r * 2 + a] * x[r * 8 + c] * w[c * 2 + b];
      CHECK(mapped[a * 2 + b] == doctest::Approx(sum).epsilon(1e-10));
    }

  // Save, reload, compare bit for bit.
  TempDir tmp;
  const std::string path = tmp.file("model.json");
  REQUIRE(spdml_model_save(model, path.c_str()) == SPDML_OK);
  spdml_model* loaded = nullptr;
  REQUIRE(spdml_model_load(path.c_str(), &loaded) == SPDML_OK);
  double w2[16];
  REQUIRE(spdml_model_projection(loaded, w2) == SPDML_OK);
  CHECK(std::memcmp(w, w2, sizeof w) == 0);
  int n2 = 0, m2 = 0;
  REQUIRE(spdml_model_info(loaded, &n2, &m2, nullptr, nullptr, nullptr) ==
          SPDML_OK);
  CHECK(n2 == 8);
  CHECK(m2 == 2);

  spdml_model_destroy(loaded);
  spdml_model_destroy(model);
  spdml_model_destroy(nullptr);
  spdml_dataset_destroy(ds);
}

TEST_CASE("fit rejects bad parameters") {
  spdml_dataset* ds = make_synth();
  spdml_train_options opts = small_fit_options();
  spdml_model* model = nullptr;

  opts.m = 8;  // must be strictly below the ambient dimension
  CHECK(spdml_fit(ds, &opts, nullptr, nullptr, nullptr, nullptr, &model) ==
        SPDML_ERR_INVALID_PARAMS);
  CHECK(model == nullptr);

  opts.m = 0;
  CHECK(spdml_fit(ds, &opts, nullptr, nullptr, nullptr, nullptr, &model) ==
        SPDML_ERR_INVALID_PARAMS);

  opts = small_fit_options();
  CHECK(spdml_fit(nullptr, &opts, nullptr, nullptr, nullptr, nullptr,
                  &model) == SPDML_ERR_INVALID_ARG);
  CHECK(spdml_fit(ds, nullptr, nullptr, nullptr, nullptr, nullptr, &model) ==
        SPDML_ERR_INVALID_ARG);
  spdml_dataset_destroy(ds);
}

TEST_CASE("warnings are forwarded to the callback") {
  spdml_dataset* ds = make_synth();
  spdml_train_options opts = small_fit_options();
  opts.nu_w = 9;  // larger than any class allows (6 per class)
  opts.max_iters = 5;
  std::vector<std::string> warnings;
  const auto warn = [](void* user, const char* message) {
    static_cast<std::vector<std::string>*>(user)->push_back(message);
  };
  spdml_model* model = nullptr;
  REQUIRE(spdml_fit(ds, &opts, nullptr, nullptr, warn, &warnings, &model) ==
          SPDML_OK);
  CHECK(!warnings.empty());
  CHECK(warnings[0].find("clipped") != std::string::npos);
  spdml_model_destroy(model);
  spdml_dataset_destroy(ds);
}

TEST_CASE("nearest neighbour classification with tie towards the first") {
  spdml_dataset* ds = nullptr;
  REQUIRE(spdml_dataset_create(1, &ds) == SPDML_OK);
  const double one[1] = {1.0};
  const double four[1] = {4.0};
  REQUIRE(spdml_dataset_add(ds, one, 7) == SPDML_OK);
  REQUIRE(spdml_dataset_add(ds, one, 9) == SPDML_OK);
  REQUIRE(spdml_dataset_add(ds, four, 2) == SPDML_OK);

  int label = 0;
  REQUIRE(spdml_nn_classify(ds, one, SPDML_METRIC_AIRM, &label) == SPDML_OK);
  CHECK(label == 7);  // zero distance to samples 0 and 1; the first wins
  const double query[1] = {3.9};
  REQUIRE(spdml_nn_classify(ds, query, SPDML_METRIC_STEIN, &label) == SPDML_OK);
  CHECK(label == 2);
  CHECK(spdml_nn_classify(ds, nullptr, SPDML_METRIC_AIRM, &label) ==
        SPDML_ERR_INVALID_ARG);
  spdml_dataset_destroy(ds);
}

TEST_CASE("cross validation over a one-cell grid") {
  spdml_dataset* ds = make_synth();
  spdml_train_options opts = small_fit_options();
  opts.max_iters = 30;
  const int m_grid[1] = {2};
  const int nu_b_grid[1] = {1};
  double fold_acc[2] = {-1.0, -1.0};
  int best_m = 0, best_nu_b = 0;
  REQUIRE(spdml_cross_validate(ds, 2, m_grid, 1, nu_b_grid, 1, &opts, fold_acc,
                               &best_m, &best_nu_b) == SPDML_OK);
  CHECK(best_m == 2);
  CHECK(best_nu_b == 1);
  for (double acc : fold_acc) {
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
  }
  CHECK(spdml_cross_validate(ds, 2, nullptr, 1, nu_b_grid, 1, &opts, nullptr,
                             &best_m, &best_nu_b) == SPDML_ERR_INVALID_ARG);
  CHECK(spdml_cross_validate(ds, 0, m_grid, 1, nu_b_grid, 1, &opts, nullptr,
                             &best_m, &best_nu_b) == SPDML_ERR_FOLD_TOO_SMALL);
  spdml_dataset_destroy(ds);
}

TEST_CASE("model io failure modes") {
  spdml_model* model = nullptr;
  CHECK(spdml_model_load("/nonexistent/spdml/model.json", &model) ==
        SPDML_ERR_IO);
  CHECK(model == nullptr);

  TempDir tmp;
  const std::string garbage = tmp.file("garbage.json");
  std::ofstream(garbage) << "this is not a model";
  CHECK(spdml_model_load(garbage.c_str(), &model) == SPDML_ERR_PARSE);
  CHECK(model == nullptr);
}

TEST_CASE("self checks run clean end to end") {
  CheckLog log;
  REQUIRE(spdml_run_checks(19, record_check, &log) == SPDML_OK);
  CHECK(log.names.size() == 17);
  CHECK(log.failures == 0);
  bool found = false;
  for (const std::string& name : log.names)
    found = found || name == "airm_affine_invariance";
  CHECK(found);
}
