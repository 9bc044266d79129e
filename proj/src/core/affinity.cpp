#include "core/affinity.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "core/parallel.hpp"

namespace spdml {

LabeledSpdDataset LabeledSpdDataset::make(std::vector<SpdMatrix> matrices,
                                          std::vector<int> labels) {
  if (matrices.empty())
    throw Error(ErrorCode::EmptyList, "dataset has no samples");
  if (matrices.size() != labels.size())
    throw Error(ErrorCode::InvalidParams,
                "got " + std::to_string(matrices.size()) + " matrices but " +
                    std::to_string(labels.size()) + " labels");
  const Eigen::Index dim = matrices.front().dim();
  for (const SpdMatrix& x : matrices)
    if (x.dim() != dim)
      throw Error(ErrorCode::DimMismatch,
                  "all matrices in a dataset must share one dimension");
  return LabeledSpdDataset(std::move(matrices), std::move(labels));
}

Eigen::Index LabeledSpdDataset::min_class_size() const {
  std::map<int, Eigen::Index> sizes;
  for (int label : labels_) sizes[label]++;
  Eigen::Index smallest = size();
  for (const auto& [label, count] : sizes) smallest = std::min(smallest, count);
  return smallest;
}

Eigen::Index LabeledSpdDataset::class_count() const {
  return static_cast<Eigen::Index>(
      std::set<int>(labels_.begin(), labels_.end()).size());
}

Eigen::MatrixXd distance_matrix(const LabeledSpdDataset& data, Metric metric) {
  const Eigen::Index p = data.size();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(p, p);

  // Unordered pairs (i, j) with i < j, laid out row by row.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i + 1; j < p; ++j) pairs.emplace_back(i, j);

  parallel_chunks(pairs.size(), 64,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t k = begin; k < end; ++k) {
                      const auto [i, j] = pairs[k];
                      const double d =
                          dist_sq(metric, data.matrix(i), data.matrix(j));
                      dist(i, j) = d;
                      dist(j, i) = d;
                    }
                  });
  return dist;
}

namespace {

Eigen::MatrixXd neighbour_graph(const LabeledSpdDataset& data,
                                const Eigen::MatrixXd& dist, int nu,
                                bool same_class, const WarnFn& warn) {
  const Eigen::Index p = data.size();
  if (nu < 1)
    throw Error(ErrorCode::InvalidParams,
                "neighbour count must be at least 1, got " +
                    std::to_string(nu));
  if (dist.rows() != p || dist.cols() != p)
    throw Error(ErrorCode::DimMismatch,
                "distance matrix does not match the dataset size");

  Eigen::MatrixXd graph = Eigen::MatrixXd::Zero(p, p);
  std::set<int> clipped_labels;
  for (Eigen::Index i = 0; i < p; ++i) {
    std::vector<Eigen::Index> candidates;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (j == i) continue;
      if ((data.label(j) == data.label(i)) == same_class)
        candidates.push_back(j);
    }
    if (static_cast<int>(candidates.size()) < nu)
      clipped_labels.insert(data.label(i));
    // Order by distance, ties towards the lower index.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                       return dist(i, a) < dist(i, b);
                     });
    const std::size_t take =
        std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(nu));
    for (std::size_t k = 0; k < take; ++k) {
      graph(i, candidates[k]) = 1.0;
      graph(candidates[k], i) = 1.0;  // or-symmetrisation
    }
  }
  if (warn) {
    for (int label : clipped_labels)
      warn(std::string(same_class ? "within" : "between") +
           "-class neighbour count " + std::to_string(nu) +
           " clipped for class " + std::to_string(label) +
           ": not enough candidates");
  }
  return graph;
}

}  // namespace

Eigen::MatrixXd within_graph(const LabeledSpdDataset& data,
                             const Eigen::MatrixXd& dist, int nu,
                             const WarnFn& warn) {
  return neighbour_graph(data, dist, nu, true, warn);
}

Eigen::MatrixXd between_graph(const LabeledSpdDataset& data,
                              const Eigen::MatrixXd& dist, int nu,
                              const WarnFn& warn) {
  return neighbour_graph(data, dist, nu, false, warn);
}

AffinityMatrix AffinityMatrix::make(const Eigen::MatrixXd& entries) {
  if (entries.rows() != entries.cols())
    throw Error(ErrorCode::NotSquare, "affinity matrix must be square");
  if ((entries - entries.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw Error(ErrorCode::NotSymmetric, "affinity matrix must be symmetric");
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    if (entries(i, i) != 0.0)
      throw Error(ErrorCode::InvalidParams,
                  "affinity matrix must have a zero diagonal");
    for (Eigen::Index j = 0; j < entries.cols(); ++j) {
      const double a = entries(i, j);
      if (a != -1.0 && a != 0.0 && a != 1.0)
        throw Error(ErrorCode::InvalidParams,
                    "affinity entries must be -1, 0 or +1");
    }
  }
  return AffinityMatrix(entries);
}

AffinityMatrix affinity(const LabeledSpdDataset& data, int nu_w, int nu_b,
                        Metric metric, const WarnFn& warn) {
  const Eigen::MatrixXd dist = distance_matrix(data, metric);
  const Eigen::MatrixXd within = within_graph(data, dist, nu_w, warn);
  const Eigen::MatrixXd between = between_graph(data, dist, nu_b, warn);
  return AffinityMatrix::make(within - between);
}

}  // namespace spdml
