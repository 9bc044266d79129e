// Labelled SPD datasets and the within/between nearest-neighbour affinity.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "core/spd.hpp"
#include "core/types.hpp"

namespace spdml {

// Sink for non-fatal warnings (small classes clipping neighbour counts).
using WarnFn = std::function<void(const std::string&)>;

class LabeledSpdDataset {
public:
  // Labels are arbitrary integers compared only for equality.
  static LabeledSpdDataset make(std::vector<SpdMatrix> matrices,
                                std::vector<int> labels);

  Eigen::Index size() const { return static_cast<Eigen::Index>(matrices_.size()); }
  Eigen::Index dim() const { return matrices_.front().dim(); }
  const SpdMatrix& matrix(Eigen::Index i) const { return matrices_[i]; }
  int label(Eigen::Index i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }

  // Size of the smallest class.
  Eigen::Index min_class_size() const;
  Eigen::Index class_count() const;

private:
  LabeledSpdDataset(std::vector<SpdMatrix> matrices, std::vector<int> labels)
      : matrices_(std::move(matrices)), labels_(std::move(labels)) {}
  std::vector<SpdMatrix> matrices_;
  std::vector<int> labels_;
};

// Symmetric matrix of pairwise squared distances, zero diagonal.
Eigen::MatrixXd distance_matrix(const LabeledSpdDataset& data, Metric metric);

// Binary graph linking each sample to its nu nearest same-class neighbours
// (or-symmetrised). Ties break towards the lower sample index. A class too
// small to supply nu neighbours is clipped and reported through warn.
Eigen::MatrixXd within_graph(const LabeledSpdDataset& data,
                             const Eigen::MatrixXd& dist, int nu,
                             const WarnFn& warn = {});

// Same construction over nearest different-class neighbours.
Eigen::MatrixXd between_graph(const LabeledSpdDataset& data,
                              const Eigen::MatrixXd& dist, int nu,
                              const WarnFn& warn = {});

// Affinity with entries in {-1, 0, +1}: +1 for within edges, -1 for between
// edges. The supports are disjoint because candidate sets never overlap.
class AffinityMatrix {
public:
  static AffinityMatrix make(const Eigen::MatrixXd& entries);

  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.rows(); }

private:
  explicit AffinityMatrix(Eigen::MatrixXd entries)
      : entries_(std::move(entries)) {}
  Eigen::MatrixXd entries_;
};

AffinityMatrix affinity(const LabeledSpdDataset& data, int nu_w, int nu_b,
                        Metric metric, const WarnFn& warn = {});

}  // namespace spdml
