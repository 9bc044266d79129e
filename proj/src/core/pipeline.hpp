// End-to-end workflows: training, applying and selecting models.
#pragma once

#include <cstdint>
#include <vector>

#include "core/affinity.hpp"
#include "core/optimizer.hpp"
#include "core/projection.hpp"
#include "core/rng.hpp"

namespace spdml {

struct TraceSummary {
  int iterations = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double final_grad_norm = 0.0;
  StopReason reason = StopReason::MaxIterations;
};

struct SpdMlModel {
  Projection w;
  Metric metric;
  int nu_w;
  int nu_b;
  std::uint64_t seed;  // provenance only; training itself is deterministic
  TraceSummary summary;
};

struct FitOptions {
  Metric metric = Metric::Airm;
  int m = 0;       // required, 1 <= m < n
  int nu_w = 0;    // 0: one less than the smallest class size, at least 1
  int nu_b = 1;
  CgConfig cg;
  std::uint64_t seed = 0;
};

// Builds the affinity, minimises the cost from the truncated identity frame
// and wraps the result. Small classes clip nu_w per class with a warning.
SpdMlModel fit(const LabeledSpdDataset& data, const FitOptions& opts,
               const WarnFn& warn = {}, const TraceFn& sink = {});

// W^T X W for the learned projection.
SpdMatrix transform(const SpdMlModel& model, const SpdMatrix& x);

// Label of the nearest training sample; ties go to the lowest index.
int nn_classify(const LabeledSpdDataset& train, const SpdMatrix& query,
                Metric metric);

// Fraction of queries whose nearest training sample shares their label.
double nn_accuracy(const LabeledSpdDataset& train,
                   const std::vector<SpdMatrix>& queries,
                   const std::vector<int>& query_labels, Metric metric);

// Shuffled, stratified fold assignment: folds[f] lists the sample indices
// held out in fold f. Every class appears in every training split.
std::vector<std::vector<Eigen::Index>> stratified_folds(
    const std::vector<int>& labels, int folds, std::uint64_t seed);

struct CvPlan {
  int folds = 5;
  std::vector<int> m_grid;
  std::vector<int> nu_b_grid;
};

struct CvResult {
  int best_m = 0;
  int best_nu_b = 0;
  // accuracies[mi][bi][fold], and the per-cell mean over folds.
  std::vector<std::vector<std::vector<double>>> accuracies;
  std::vector<std::vector<double>> mean_accuracy;
};

// Grid search by k-fold cross-validation. Ties resolve to the smaller m,
// then the smaller nu_b, so results do not depend on float luck alone.
CvResult cross_validate(const LabeledSpdDataset& data, const CvPlan& plan,
                        const FitOptions& base, const WarnFn& warn = {});

struct PlantedDataset {
  LabeledSpdDataset data;
  Eigen::MatrixXd basis;  // n x m_true frame carrying the class structure
};

// Synthetic SPD classification data: class-specific geometry lives inside a
// planted subspace, the complement carries class-independent clutter that
// confuses full-dimension comparisons but vanishes under the right
// projection.
PlantedDataset make_planted_dataset(int n, int m_true, int classes,
                                    int per_class, double noise,
                                    std::uint64_t seed);

}  // namespace spdml
