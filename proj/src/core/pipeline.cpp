#include "core/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "core/objective.hpp"

namespace spdml {

SpdMlModel fit(const LabeledSpdDataset& data, const FitOptions& opts,
               const WarnFn& warn, const TraceFn& sink) {
  const Eigen::Index n = data.dim();
  if (opts.m < 1 || opts.m >= n)
    throw Error(ErrorCode::InvalidParams,
                "target dimension must satisfy 1 <= m < n, got m = " +
                    std::to_string(opts.m) + " with n = " + std::to_string(n));
  if (opts.nu_w < 0 || opts.nu_b < 1)
    throw Error(ErrorCode::InvalidParams,
                "neighbour counts must satisfy nu_w >= 0 (0 = auto) and "
                "nu_b >= 1");
  const int nu_w =
      opts.nu_w > 0
          ? opts.nu_w
          : std::max<int>(1, static_cast<int>(data.min_class_size()) - 1);

  const AffinityMatrix a = affinity(data, nu_w, opts.nu_b, opts.metric, warn);
  const ObjectiveContext ctx = ObjectiveContext::make(data, a, opts.metric);
  const Projection w0 = Projection::identity(n, opts.m);
  const MinimizeResult res = minimize(ctx, w0, opts.cg, sink);

  SpdMlModel model{res.w, opts.metric, nu_w, opts.nu_b, opts.seed, {}};
  model.summary.iterations = res.iterations;
  model.summary.initial_cost = res.initial_cost;
  model.summary.final_cost = res.final_cost;
  model.summary.final_grad_norm = res.final_grad_norm;
  model.summary.reason = res.reason;
  return model;
}

SpdMatrix transform(const SpdMlModel& model, const SpdMatrix& x) {
  return map_spd(x, model.w);
}

int nn_classify(const LabeledSpdDataset& train, const SpdMatrix& query,
                Metric metric) {
  Eigen::Index best = 0;
  double best_dist = dist_sq(metric, query, train.matrix(0));
  for (Eigen::Index i = 1; i < train.size(); ++i) {
    const double d = dist_sq(metric, query, train.matrix(i));
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return train.label(best);
}

double nn_accuracy(const LabeledSpdDataset& train,
                   const std::vector<SpdMatrix>& queries,
                   const std::vector<int>& query_labels, Metric metric) {
  if (queries.empty())
    throw Error(ErrorCode::EmptyList, "no queries to classify");
  if (queries.size() != query_labels.size())
    throw Error(ErrorCode::InvalidParams,
                "query labels do not match the query count");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < queries.size(); ++i)
    if (nn_classify(train, queries[i], metric) == query_labels[i]) hits++;
  return static_cast<double>(hits) / static_cast<double>(queries.size());
}

std::vector<std::vector<Eigen::Index>> stratified_folds(
    const std::vector<int>& labels, int folds, std::uint64_t seed) {
  if (labels.empty()) throw Error(ErrorCode::EmptyList, "no samples to fold");
  std::map<int, std::vector<Eigen::Index>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(static_cast<Eigen::Index>(i));

  Eigen::Index min_class = static_cast<Eigen::Index>(labels.size());
  for (const auto& [label, members] : by_class)
    min_class = std::min(min_class, static_cast<Eigen::Index>(members.size()));
  if (folds < 2 || folds > min_class)
    throw Error(ErrorCode::FoldTooSmall,
                "need 2 <= folds <= smallest class size (" +
                    std::to_string(min_class) + "), got " +
                    std::to_string(folds));

  Rng rng(seed);
  std::vector<std::vector<Eigen::Index>> out(folds);
  for (auto& [label, members] : by_class) {
    // Fisher-Yates, then deal round-robin so folds stay balanced per class.
    for (std::size_t k = members.size(); k > 1; --k)
      std::swap(members[k - 1], members[rng.below(k)]);
    for (std::size_t k = 0; k < members.size(); ++k)
      out[k % folds].push_back(members[k]);
  }
  for (auto& fold : out) std::sort(fold.begin(), fold.end());
  return out;
}

CvResult cross_validate(const LabeledSpdDataset& data, const CvPlan& plan,
                        const FitOptions& base, const WarnFn& warn) {
  if (plan.m_grid.empty() || plan.nu_b_grid.empty())
    throw Error(ErrorCode::InvalidParams,
                "cross-validation needs non-empty parameter grids");
  for (int m : plan.m_grid)
    if (m < 1 || m >= data.dim())
      throw Error(ErrorCode::InvalidParams,
                  "grid dimension " + std::to_string(m) + " out of range");
  for (int nu_b : plan.nu_b_grid)
    if (nu_b < 1)
      throw Error(ErrorCode::InvalidParams,
                  "grid neighbour count must be at least 1");

  const auto folds = stratified_folds(data.labels(), plan.folds, base.seed);

  CvResult result;
  result.accuracies.assign(
      plan.m_grid.size(),
      std::vector<std::vector<double>>(plan.nu_b_grid.size(),
                                       std::vector<double>(folds.size(), 0.0)));
  result.mean_accuracy.assign(plan.m_grid.size(),
                              std::vector<double>(plan.nu_b_grid.size(), 0.0));

  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<char> held(data.size(), 0);
    for (Eigen::Index i : folds[f]) held[i] = 1;
    std::vector<SpdMatrix> train_x, test_x;
    std::vector<int> train_y, test_y;
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      if (held[i]) {
        test_x.push_back(data.matrix(i));
        test_y.push_back(data.label(i));
      } else {
        train_x.push_back(data.matrix(i));
        train_y.push_back(data.label(i));
      }
    }
    const LabeledSpdDataset train =
        LabeledSpdDataset::make(std::move(train_x), std::move(train_y));

    for (std::size_t mi = 0; mi < plan.m_grid.size(); ++mi) {
      for (std::size_t bi = 0; bi < plan.nu_b_grid.size(); ++bi) {
        FitOptions opts = base;
        opts.m = plan.m_grid[mi];
        opts.nu_b = plan.nu_b_grid[bi];
        const SpdMlModel model = fit(train, opts, warn);

        std::vector<SpdMatrix> train_mapped, test_mapped;
        train_mapped.reserve(train.size());
        for (Eigen::Index i = 0; i < train.size(); ++i)
          train_mapped.push_back(transform(model, train.matrix(i)));
        test_mapped.reserve(test_x.size());
        for (const SpdMatrix& x : test_x)
          test_mapped.push_back(transform(model, x));
        const LabeledSpdDataset mapped = LabeledSpdDataset::make(
            std::move(train_mapped), std::vector<int>(train.labels()));
        result.accuracies[mi][bi][f] =
            nn_accuracy(mapped, test_mapped, test_y, base.metric);
      }
    }
  }

  double best = -1.0;
  for (std::size_t mi = 0; mi < plan.m_grid.size(); ++mi) {
    for (std::size_t bi = 0; bi < plan.nu_b_grid.size(); ++bi) {
      double mean = 0.0;
      for (double acc : result.accuracies[mi][bi]) mean += acc;
      mean /= static_cast<double>(folds.size());
      result.mean_accuracy[mi][bi] = mean;
      const int m = plan.m_grid[mi];
      const int nu_b = plan.nu_b_grid[bi];
      // Ties go to the smaller dimension, then the smaller neighbour count.
      const bool wins =
          mean > best ||
          (mean == best &&
           (m < result.best_m ||
            (m == result.best_m && nu_b < result.best_nu_b)));
      if (wins) {
        best = mean;
        result.best_m = m;
        result.best_nu_b = nu_b;
      }
    }
  }
  return result;
}

PlantedDataset make_planted_dataset(int n, int m_true, int classes,
                                    int per_class, double noise,
                                    std::uint64_t seed) {
  if (n < 2 || m_true < 1 || m_true >= n)
    throw Error(ErrorCode::InvalidParams,
                "planted subspace needs 1 <= m_true < n and n >= 2");
  if (classes < 2 || per_class < 1)
    throw Error(ErrorCode::InvalidParams,
                "planted data needs at least two classes and one sample per "
                "class");
  if (!(noise >= 0.0))
    throw Error(ErrorCode::InvalidParams, "noise must be non-negative");

  Rng rng(seed);
  const Eigen::Index q = n - m_true;

  // Random orthogonal change of basis hiding the planted block structure.
  const Eigen::MatrixXd b =
      Eigen::HouseholderQR<Eigen::MatrixXd>(rng.gaussian_matrix(n, n))
          .householderQ();

  // Class prototypes in log coordinates of the planted block.
  std::vector<Eigen::MatrixXd> prototypes;
  prototypes.reserve(classes);
  for (int c = 0; c < classes; ++c)
    prototypes.push_back(0.75 * rng.gaussian_symmetric(m_true));

  // The complement block carries class-independent clutter: a shared rough
  // texture plus a per-sample volume factor. Both grow with the noise level
  // so that full-dimension distances are dominated by clutter mismatch while
  // the planted block keeps its class structure.
  const double clutter = 0.25 + noise;
  const double volume = 10.0 / 3.0 * noise;

  std::vector<SpdMatrix> matrices;
  std::vector<int> labels;
  matrices.reserve(static_cast<std::size_t>(classes) * per_class);
  for (int c = 0; c < classes; ++c) {
    for (int s = 0; s < per_class; ++s) {
      const Eigen::MatrixXd signal_log =
          prototypes[c] + noise * rng.gaussian_symmetric(m_true);
      const Eigen::MatrixXd clutter_log =
          clutter * rng.gaussian_symmetric(q) +
          volume * rng.gaussian() * Eigen::MatrixXd::Identity(q, q);
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
      block.topLeftCorner(m_true, m_true) = spd_exp(signal_log).matrix();
      block.bottomRightCorner(q, q) = spd_exp(clutter_log).matrix();
      const Eigen::MatrixXd x = b * block * b.transpose();
      matrices.push_back(SpdMatrix::make(0.5 * (x + x.transpose())));
      labels.push_back(c + 1);
    }
  }
  return PlantedDataset{
      LabeledSpdDataset::make(std::move(matrices), std::move(labels)),
      b.leftCols(m_true)};
}

}  // namespace spdml
