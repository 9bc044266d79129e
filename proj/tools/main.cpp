// spdml command line tool. Links only the public C API plus the local text
// formats; all numerics live behind the shared library.
#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spdml/spdml.h"
#include "textio.hpp"

namespace {

namespace fs = std::filesystem;
using cli::DataError;
using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

// Bad flags or parameter values.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Failures of the numerics themselves, as opposed to bad input data.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

void require_ok(spdml_status status, const std::string& what) {
  if (status == SPDML_OK) return;
  const std::string message = what + ": " + spdml_status_name(status) + ": " +
                              spdml_last_error();
  switch (status) {
    case SPDML_ERR_INVALID_ARG:
    case SPDML_ERR_INVALID_PARAMS:
      throw UsageError(message);
    case SPDML_ERR_SINGULAR_PROJECTION:
    case SPDML_ERR_NUMERICAL:
    case SPDML_ERR_CHECK_FAILED:
    case SPDML_ERR_UNKNOWN:
      throw NumericalError(message);
    default:
      throw DataError(message);
  }
}

struct DatasetDeleter {
  void operator()(spdml_dataset* p) const { spdml_dataset_destroy(p); }
};
struct ModelDeleter {
  void operator()(spdml_model* p) const { spdml_model_destroy(p); }
};
using DatasetPtr = std::unique_ptr<spdml_dataset, DatasetDeleter>;
using ModelPtr = std::unique_ptr<spdml_model, ModelDeleter>;

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void warn_to_stderr(void*, const char* message) {
  std::cerr << "warning: " << message << "\n";
}

// ---- dataset loading ------------------------------------------------------

DatasetPtr load_spd_dataset(const fs::path& manifest_path,
                            const cli::Manifest& manifest) {
  if (manifest.kind != "spd")
    throw DataError("manifest '" + manifest_path.string() +
                    "' has kind '" + manifest.kind + "', expected 'spd'");
  spdml_dataset* raw = nullptr;
  require_ok(spdml_dataset_create(manifest.dim, &raw), "creating dataset");
  DatasetPtr ds(raw);
  for (const auto& sample : manifest.samples) {
    const cli::Matrix m = cli::read_matrix_file(sample.path);
    if (m.rows != manifest.dim || m.cols != manifest.dim)
      throw DataError("'" + sample.path.string() + "' is " +
                      std::to_string(m.rows) + "x" + std::to_string(m.cols) +
                      " but the manifest declares n = " +
                      std::to_string(manifest.dim));
    require_ok(spdml_dataset_add(ds.get(), m.values.data(), sample.label),
               "adding '" + sample.path.string() + "'");
  }
  return ds;
}

DatasetPtr load_spd_dataset(const fs::path& manifest_path) {
  return load_spd_dataset(manifest_path, cli::read_manifest(manifest_path));
}

// ---- shared train options plumbing ----------------------------------------

struct TrainSettings {
  spdml_train_options opts;
  std::string config_path;
  std::string metric_flag;
  std::string line_search_flag;
  // CLI11 fills these; negative sentinel means "not given".
  int m = -1;
  int nu_w = -1;
  int nu_b = -1;
  int max_iters = -1;
  int restart_every = -1;
  double grad_tol = -1.0;
  double cost_tol = -1.0;
  double max_step = -1.0;
  std::optional<std::uint64_t> seed;

  TrainSettings() { spdml_train_options_init(&opts); }
};

spdml_metric parse_metric(const std::string& name) {
  if (name == "airm") return SPDML_METRIC_AIRM;
  if (name == "stein") return SPDML_METRIC_STEIN;
  throw UsageError("unknown metric '" + name + "' (expected airm or stein)");
}

spdml_line_search parse_line_search(const std::string& name) {
  if (name == "golden") return SPDML_LINE_SEARCH_GOLDEN;
  if (name == "backtracking") return SPDML_LINE_SEARCH_BACKTRACKING;
  throw UsageError("unknown line search '" + name +
                   "' (expected golden or backtracking)");
}

void apply_config_file(const std::string& path, spdml_train_options& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::exception& e) {
    throw DataError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw DataError("config must be a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "metric") opts.metric = parse_metric(value.get<std::string>());
      else if (key == "m") opts.m = value.get<int>();
      else if (key == "nu_w") opts.nu_w = value.get<int>();
      else if (key == "nu_b") opts.nu_b = value.get<int>();
      else if (key == "seed") opts.seed = value.get<std::uint64_t>();
      else if (key == "max_iters") opts.max_iters = value.get<int>();
      else if (key == "grad_tol") opts.grad_tol = value.get<double>();
      else if (key == "cost_tol") opts.cost_tol = value.get<double>();
      else if (key == "max_step") opts.max_step = value.get<double>();
      else if (key == "restart_every") opts.restart_every = value.get<int>();
      else if (key == "line_search")
        opts.line_search = parse_line_search(value.get<std::string>());
      else
        throw UsageError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw DataError("config '" + path + "': " + e.what());
  }
}

spdml_train_options resolve_options(const TrainSettings& s) {
  spdml_train_options opts = s.opts;
  if (!s.config_path.empty()) apply_config_file(s.config_path, opts);
  if (!s.metric_flag.empty()) opts.metric = parse_metric(s.metric_flag);
  if (!s.line_search_flag.empty())
    opts.line_search = parse_line_search(s.line_search_flag);
  if (s.m >= 0) opts.m = s.m;
  if (s.nu_w >= 0) opts.nu_w = s.nu_w;
  if (s.nu_b >= 0) opts.nu_b = s.nu_b;
  if (s.max_iters >= 0) opts.max_iters = s.max_iters;
  if (s.restart_every >= 0) opts.restart_every = s.restart_every;
  if (s.grad_tol >= 0.0) opts.grad_tol = s.grad_tol;
  if (s.cost_tol >= 0.0) opts.cost_tol = s.cost_tol;
  if (s.max_step >= 0.0) opts.max_step = s.max_step;
  if (s.seed) opts.seed = *s.seed;
  return opts;
}

void add_train_flags(CLI::App* cmd, TrainSettings& s) {
  cmd->add_option("--config", s.config_path,
                  "JSON config; flags given here override it");
  cmd->add_option("--metric", s.metric_flag, "airm or stein");
  cmd->add_option("--m", s.m, "target dimension");
  cmd->add_option("--nu-w", s.nu_w,
                  "within-class neighbours (0 = smallest class size - 1)");
  cmd->add_option("--nu-b", s.nu_b, "between-class neighbours");
  cmd->add_option("--seed", s.seed, "seed recorded with the model");
  cmd->add_option("--max-iters", s.max_iters, "optimizer iteration cap");
  cmd->add_option("--grad-tol", s.grad_tol,
                  "gradient norm stop (0 = scaled default)");
  cmd->add_option("--cost-tol", s.cost_tol, "relative cost decrease stop");
  cmd->add_option("--max-step", s.max_step, "line search upper bound");
  cmd->add_option("--restart-every", s.restart_every,
                  "CG restart period (0 = manifold dimension)");
  cmd->add_option("--line-search", s.line_search_flag,
                  "golden or backtracking");
}

// ---- subcommands -----------------------------------------------------------

struct TraceRow {
  int iteration;
  double cost;
  double grad_norm;
  double step;
};

int cmd_train(const std::string& manifest_path, const TrainSettings& settings,
              const std::string& out_path, const std::string& trace_path) {
  const spdml_train_options opts = resolve_options(settings);
  if (opts.m < 1)
    throw UsageError("target dimension is required (--m or config \"m\")");

  DatasetPtr ds = load_spd_dataset(manifest_path);

  std::vector<TraceRow> trace;
  auto trace_cb = [](void* user, int iteration, double cost, double grad_norm,
                     double step) {
    static_cast<std::vector<TraceRow>*>(user)->push_back(
        {iteration, cost, grad_norm, step});
  };

  spdml_model* raw = nullptr;
  require_ok(spdml_fit(ds.get(), &opts, trace_cb, &trace, warn_to_stderr,
                       nullptr, &raw),
             "training");
  ModelPtr model(raw);
  require_ok(spdml_model_save(model.get(), out_path.c_str()),
             "saving model to '" + out_path + "'");

  if (!trace_path.empty()) {
    std::ostringstream tsv;
    tsv << "iter\tcost\tgrad_norm\tstep\n";
    for (const TraceRow& row : trace)
      tsv << row.iteration << "\t" << format_double(row.cost) << "\t"
          << format_double(row.grad_norm) << "\t" << format_double(row.step)
          << "\n";
    cli::atomic_write_text(trace_path, tsv.str());
  }

  // The saved file carries the authoritative summary; echo it.
  json saved;
  {
    std::ifstream in(out_path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    saved = json::parse(buffer.str());
  }
  json summary;
  summary["model"] = out_path;
  summary["n"] = saved["n"];
  summary["m"] = saved["m"];
  summary["metric"] = saved["metric"];
  summary["nu_w"] = saved["nu_w"];
  summary["nu_b"] = saved["nu_b"];
  summary["optimizer"] = saved["optimizer"];
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_transform(const std::string& model_path,
                  const std::string& manifest_path,
                  const std::string& out_dir) {
  spdml_model* raw = nullptr;
  require_ok(spdml_model_load(model_path.c_str(), &raw),
             "loading model '" + model_path + "'");
  ModelPtr model(raw);
  int n = 0, m = 0;
  require_ok(spdml_model_info(model.get(), &n, &m, nullptr, nullptr, nullptr),
             "reading model info");

  const cli::Manifest manifest = cli::read_manifest(manifest_path);
  if (manifest.kind != "spd")
    throw DataError("transform expects a manifest of kind 'spd'");

  fs::create_directories(out_dir);
  std::vector<cli::ManifestEntry> outputs;
  for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
    const auto& sample = manifest.samples[i];
    const cli::Matrix x = cli::read_matrix_file(sample.path);
    if (x.rows != n || x.cols != n)
      throw DataError("'" + sample.path.string() + "' is " +
                      std::to_string(x.rows) + "x" + std::to_string(x.cols) +
                      " but the model expects " + std::to_string(n) + "x" +
                      std::to_string(n));
    cli::Matrix y;
    y.rows = y.cols = m;
    y.values.resize(static_cast<size_t>(m) * m);
    require_ok(
        spdml_model_transform(model.get(), x.values.data(), y.values.data()),
        "transforming '" + sample.path.string() + "'");
    char name[32];
    std::snprintf(name, sizeof name, "proj_%04zu.txt", i);
    const fs::path out_path = fs::path(out_dir) / name;
    cli::write_matrix_file(out_path, y);
    outputs.push_back({out_path, sample.label});
  }
  cli::write_manifest(fs::path(out_dir) / "manifest.json", "spd", m, outputs);
  std::cout << "wrote " << outputs.size() << " projected matrices to "
            << out_dir << "\n";
  return 0;
}

int cmd_rcm(const std::string& manifest_path, const std::string& out_dir) {
  const cli::Manifest manifest = cli::read_manifest(manifest_path);
  if (manifest.kind != "features")
    throw DataError("rcm expects a manifest of kind 'features'");

  // Convert everything first so a bad sample fails the run without leaving a
  // half-written output directory behind.
  std::vector<cli::Matrix> outputs;
  std::vector<std::string> failures;
  const int n_features = manifest.dim;
  for (const auto& sample : manifest.samples) {
    const cli::Matrix obs = cli::read_matrix_file(sample.path);
    if (obs.rows != n_features) {
      failures.push_back("'" + sample.path.string() + "': feature count " +
                         std::to_string(obs.rows) +
                         " differs from the declared " +
                         std::to_string(n_features));
      continue;
    }
    cli::Matrix cov;
    cov.rows = cov.cols = obs.rows;
    cov.values.resize(static_cast<size_t>(obs.rows) * obs.rows);
    const spdml_status status = spdml_rcm(obs.rows, obs.cols,
                                          obs.values.data(), cov.values.data());
    if (status != SPDML_OK) {
      failures.push_back("'" + sample.path.string() + "': " +
                         spdml_status_name(status) + ": " +
                         spdml_last_error());
      continue;
    }
    outputs.push_back(std::move(cov));
  }
  if (!failures.empty()) {
    for (const std::string& failure : failures)
      std::cerr << "error: " << failure << "\n";
    throw DataError(std::to_string(failures.size()) + " of " +
                    std::to_string(manifest.samples.size()) +
                    " samples failed covariance conversion");
  }

  fs::create_directories(out_dir);
  std::vector<cli::ManifestEntry> entries;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "rcm_%04zu.txt", i);
    const fs::path out_path = fs::path(out_dir) / name;
    cli::write_matrix_file(out_path, outputs[i]);
    entries.push_back({out_path, manifest.samples[i].label});
  }
  cli::write_manifest(fs::path(out_dir) / "manifest.json", "spd", n_features,
                      entries);
  std::cout << "wrote " << entries.size() << " covariance descriptors to "
            << out_dir << "\n";
  return 0;
}

int cmd_classify(const std::string& model_path, const std::string& train_path,
                 const std::string& test_path, const std::string& out_dir) {
  spdml_model* raw = nullptr;
  require_ok(spdml_model_load(model_path.c_str(), &raw),
             "loading model '" + model_path + "'");
  ModelPtr model(raw);
  int n = 0, m = 0;
  spdml_metric metric = SPDML_METRIC_AIRM;
  require_ok(spdml_model_info(model.get(), &n, &m, &metric, nullptr, nullptr),
             "reading model info");

  // Project the training set once, then classify queries in the small space.
  const cli::Manifest train_manifest = cli::read_manifest(train_path);
  DatasetPtr train_raw = load_spd_dataset(train_path, train_manifest);
  if (spdml_dataset_dim(train_raw.get()) != n)
    throw DataError("training data dimension does not match the model");

  spdml_dataset* mapped_raw = nullptr;
  require_ok(spdml_dataset_create(m, &mapped_raw), "creating projected set");
  DatasetPtr mapped(mapped_raw);
  std::vector<double> x(static_cast<size_t>(n) * n);
  std::vector<double> y(static_cast<size_t>(m) * m);
  for (int i = 0; i < spdml_dataset_size(train_raw.get()); ++i) {
    int label = 0;
    require_ok(spdml_dataset_matrix(train_raw.get(), i, x.data()), "reading");
    require_ok(spdml_dataset_label(train_raw.get(), i, &label), "reading");
    require_ok(spdml_model_transform(model.get(), x.data(), y.data()),
               "projecting training sample");
    require_ok(spdml_dataset_add(mapped.get(), y.data(), label),
               "storing projected training sample");
  }

  const cli::Manifest test_manifest = cli::read_manifest(test_path);
  if (test_manifest.kind != "spd")
    throw DataError("classify expects manifests of kind 'spd'");
  std::ostringstream tsv;
  tsv << "path\tlabel\tpredicted\tcorrect\n";
  std::map<int, std::map<int, std::size_t>> confusion;
  std::map<int, std::pair<std::size_t, std::size_t>> per_class;  // hits, total
  std::size_t hits = 0;
  for (const auto& sample : test_manifest.samples) {
    const cli::Matrix query = cli::read_matrix_file(sample.path);
    if (query.rows != n || query.cols != n)
      throw DataError("'" + sample.path.string() +
                      "' does not match the model dimension");
    require_ok(spdml_model_transform(model.get(), query.values.data(),
                                     y.data()),
               "projecting '" + sample.path.string() + "'");
    int predicted = 0;
    require_ok(spdml_nn_classify(mapped.get(), y.data(), metric, &predicted),
               "classifying '" + sample.path.string() + "'");
    const bool correct = predicted == sample.label;
    if (correct) hits++;
    confusion[sample.label][predicted]++;
    per_class[sample.label].second++;
    if (correct) per_class[sample.label].first++;
    tsv << sample.path.generic_string() << "\t" << sample.label << "\t"
        << predicted << "\t" << (correct ? 1 : 0) << "\n";
  }

  const double accuracy =
      static_cast<double>(hits) / static_cast<double>(test_manifest.samples.size());
  json report;
  report["format"] = "spdml-report";
  report["task"] = "classify";
  report["model"] = model_path;
  report["n_test"] = test_manifest.samples.size();
  report["accuracy"] = accuracy;
  json per_class_json = json::object();
  for (const auto& [label, counts] : per_class)
    per_class_json[std::to_string(label)] =
        static_cast<double>(counts.first) / static_cast<double>(counts.second);
  report["per_class_accuracy"] = std::move(per_class_json);
  json confusion_json = json::object();
  for (const auto& [truth, row] : confusion) {
    json row_json = json::object();
    for (const auto& [predicted, count] : row)
      row_json[std::to_string(predicted)] = count;
    confusion_json[std::to_string(truth)] = std::move(row_json);
  }
  report["confusion"] = std::move(confusion_json);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    cli::atomic_write_text(fs::path(out_dir) / "predictions.tsv", tsv.str());
    cli::atomic_write_text(fs::path(out_dir) / "summary.json",
                           report.dump(2) + "\n");
  }
  std::cout << "accuracy " << format_double(accuracy) << " ("
            << hits << "/" << test_manifest.samples.size() << ")\n";
  return 0;
}

int cmd_cv(const std::string& manifest_path, const TrainSettings& settings,
           int folds, std::vector<int> m_grid, std::vector<int> nu_b_grid,
           const std::string& out_path) {
  const spdml_train_options opts = resolve_options(settings);
  if (m_grid.empty()) throw UsageError("--m-grid must list at least one value");
  if (nu_b_grid.empty()) nu_b_grid.push_back(opts.nu_b);

  DatasetPtr ds = load_spd_dataset(manifest_path);
  std::vector<double> fold_acc(m_grid.size() * nu_b_grid.size() *
                               static_cast<std::size_t>(folds));
  int best_m = 0, best_nu_b = 0;
  require_ok(spdml_cross_validate(ds.get(), folds, m_grid.data(),
                                  static_cast<int>(m_grid.size()),
                                  nu_b_grid.data(),
                                  static_cast<int>(nu_b_grid.size()), &opts,
                                  fold_acc.data(), &best_m, &best_nu_b),
             "cross-validation");

  json mean_grid = json::array();
  json fold_grid = json::array();
  std::size_t at = 0;
  for (std::size_t mi = 0; mi < m_grid.size(); ++mi) {
    json mean_row = json::array();
    json fold_row = json::array();
    for (std::size_t bi = 0; bi < nu_b_grid.size(); ++bi) {
      json cell = json::array();
      double mean = 0.0;
      for (int f = 0; f < folds; ++f) {
        cell.push_back(fold_acc[at]);
        mean += fold_acc[at];
        at++;
      }
      mean_row.push_back(mean / folds);
      fold_row.push_back(std::move(cell));
    }
    mean_grid.push_back(std::move(mean_row));
    fold_grid.push_back(std::move(fold_row));
  }

  json report;
  report["format"] = "spdml-report";
  report["task"] = "cv";
  report["folds"] = folds;
  report["m_grid"] = m_grid;
  report["nu_b_grid"] = nu_b_grid;
  report["best_m"] = best_m;
  report["best_nu_b"] = best_nu_b;
  report["mean_accuracy"] = std::move(mean_grid);
  report["fold_accuracy"] = std::move(fold_grid);
  if (!out_path.empty()) cli::atomic_write_text(out_path, report.dump(2) + "\n");
  std::cout << "best m=" << best_m << " nu_b=" << best_nu_b << "\n";
  return 0;
}

int cmd_check(std::uint64_t seed) {
  struct Tally {
    int total = 0;
    int passed = 0;
  } tally;
  auto cb = [](void* user, const char* name, double measured, double threshold,
               int pass) {
    auto* t = static_cast<Tally*>(user);
    t->total++;
    if (pass) t->passed++;
    std::printf("%-32s %12.3e <= %8.0e  %s\n", name, measured, threshold,
                pass ? "PASS" : "FAIL");
  };
  const spdml_status status = spdml_run_checks(seed, cb, &tally);

  // The two metrics measure length on the same scale up to sqrt(8); report
  // the measured value next to the constant it should approach.
  {
    const double t = 1e-2;
    const double one = 1.0;
    const double expt = std::exp(t);
    double airm = 0.0, stein = 0.0;
    if (spdml_airm_dist_sq(1, &one, &expt, &airm) == SPDML_OK &&
        spdml_stein_dist_sq(1, &one, &expt, &stein) == SPDML_OK &&
        stein > 0.0)
      std::printf("stein-to-airm length scale at t=1e-2: %.7f "
                  "(2*sqrt(2) = 2.8284271)\n",
                  std::sqrt(airm / stein));
  }
  std::printf("%d/%d checks passed\n", tally.passed, tally.total);
  if (status == SPDML_OK) return 0;
  if (status == SPDML_ERR_CHECK_FAILED) return kExitNumerical;
  require_ok(status, "running checks");
  return kExitNumerical;
}

int cmd_synth(int n, int m_true, int classes, int per_class, double noise,
              std::uint64_t seed, const std::string& out_dir,
              double test_fraction) {
  if (test_fraction < 0.0 || test_fraction >= 1.0)
    throw UsageError("--test-fraction must lie in [0, 1)");

  spdml_dataset* raw = nullptr;
  require_ok(spdml_synth_dataset(n, m_true, classes, per_class, noise, seed,
                                 &raw),
             "generating data");
  DatasetPtr ds(raw);

  fs::create_directories(out_dir);
  const int total = spdml_dataset_size(ds.get());
  std::vector<double> buffer(static_cast<size_t>(n) * n);
  std::vector<cli::ManifestEntry> train, test;
  // Deterministic stratified split: within each class, spread the test picks
  // evenly across the class (no randomness beyond the generator seed).
  const int test_per_class =
      static_cast<int>(test_fraction * per_class + 0.5);
  for (int i = 0; i < total; ++i) {
    int label = 0;
    require_ok(spdml_dataset_matrix(ds.get(), i, buffer.data()), "reading");
    require_ok(spdml_dataset_label(ds.get(), i, &label), "reading");
    cli::Matrix m;
    m.rows = m.cols = n;
    m.values = buffer;
    char name[32];
    std::snprintf(name, sizeof name, "sample_%04d.txt", i);
    const fs::path path = fs::path(out_dir) / name;
    cli::write_matrix_file(path, m);
    const int within = i % per_class;  // generator emits classes in blocks
    const bool is_test =
        test_per_class > 0 &&
        (within + 1) * test_per_class / per_class >
            within * test_per_class / per_class;
    (is_test ? test : train).push_back({path, label});
  }
  cli::write_manifest(fs::path(out_dir) / "train.json", "spd", n, train);
  if (!test.empty())
    cli::write_manifest(fs::path(out_dir) / "test.json", "spd", n, test);
  std::cout << "wrote " << train.size() << " training and " << test.size()
            << " test samples to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimensionality reduction and classification for symmetric "
               "positive definite matrices"};
  app.set_version_flag("--version", spdml_version());
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "learn a projection");
  std::string train_manifest, train_out = "model.json", train_trace;
  TrainSettings train_settings;
  train->add_option("--manifest", train_manifest, "spd manifest")->required();
  add_train_flags(train, train_settings);
  train->add_option("--out", train_out, "model output path");
  train->add_option("--trace", train_trace, "per-iteration TSV output");

  // transform
  auto* transform = app.add_subcommand("transform", "project spd matrices");
  std::string tf_model, tf_manifest, tf_out;
  transform->add_option("--model", tf_model)->required();
  transform->add_option("--manifest", tf_manifest)->required();
  transform->add_option("--out", tf_out, "output directory")->required();

  // classify
  auto* classify =
      app.add_subcommand("classify", "nearest-neighbour classification");
  std::string cl_model, cl_train, cl_test, cl_out;
  classify->add_option("--model", cl_model)->required();
  classify->add_option("--train", cl_train, "training manifest")->required();
  classify->add_option("--test", cl_test, "test manifest")->required();
  classify->add_option("--out", cl_out,
                       "directory for predictions.tsv and summary.json");

  // cv
  auto* cv = app.add_subcommand("cv", "cross-validated grid search");
  std::string cv_manifest, cv_out;
  TrainSettings cv_settings;
  int cv_folds = 5;
  std::vector<int> cv_m_grid, cv_nu_b_grid;
  cv->add_option("--manifest", cv_manifest)->required();
  add_train_flags(cv, cv_settings);
  cv->add_option("--folds", cv_folds, "number of folds");
  cv->add_option("--m-grid", cv_m_grid, "target dimensions to try")
      ->delimiter(',')
      ->required();
  cv->add_option("--nu-b-grid", cv_nu_b_grid,
                 "between-class neighbour counts to try")
      ->delimiter(',');
  cv->add_option("--out", cv_out, "report JSON path");

  // rcm
  auto* rcm = app.add_subcommand("rcm", "features to covariance descriptors");
  std::string rcm_manifest, rcm_out;
  rcm->add_option("--manifest", rcm_manifest, "features manifest")->required();
  rcm->add_option("--out", rcm_out, "output directory")->required();

  // check
  auto* check = app.add_subcommand("check", "run the verification suite");
  std::uint64_t check_seed = 20240815;
  check->add_option("--seed", check_seed, "seed for the generated cases");

  // synth
  auto* synth = app.add_subcommand("synth", "generate synthetic spd data");
  int sy_n = 40, sy_m_true = 5, sy_classes = 4, sy_per_class = 20;
  double sy_noise = 0.3, sy_test_fraction = 0.0;
  std::uint64_t sy_seed = 0;
  std::string sy_out;
  synth->add_option("--n", sy_n, "matrix dimension");
  synth->add_option("--m-true", sy_m_true, "planted subspace dimension");
  synth->add_option("--classes", sy_classes);
  synth->add_option("--per-class", sy_per_class);
  synth->add_option("--noise", sy_noise);
  synth->add_option("--seed", sy_seed);
  synth->add_option("--test-fraction", sy_test_fraction,
                    "held-out fraction per class");
  synth->add_option("--out", sy_out, "output directory")->required();

  try {
    app.parse(argc, argv);
    if (train->parsed())
      return cmd_train(train_manifest, train_settings, train_out, train_trace);
    if (transform->parsed()) return cmd_transform(tf_model, tf_manifest, tf_out);
    if (classify->parsed())
      return cmd_classify(cl_model, cl_train, cl_test, cl_out);
    if (cv->parsed())
      return cmd_cv(cv_manifest, cv_settings, cv_folds, cv_m_grid,
                    cv_nu_b_grid, cv_out);
    if (rcm->parsed()) return cmd_rcm(rcm_manifest, rcm_out);
    if (check->parsed()) return cmd_check(check_seed);
    if (synth->parsed())
      return cmd_synth(sy_n, sy_m_true, sy_classes, sy_per_class, sy_noise,
                       sy_seed, sy_out, sy_test_fraction);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
