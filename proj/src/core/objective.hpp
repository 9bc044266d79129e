// Affinity-weighted metric cost on the projected SPD matrices, and its
// Jacobian with respect to the projection.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "core/affinity.hpp"
#include "core/projection.hpp"
#include "core/spd.hpp"
#include "core/types.hpp"

namespace spdml {

// W^T X W as a validated SPD matrix.
SpdMatrix map_spd(const SpdMatrix& x, const Projection& w);

// Everything fixed during one optimisation: samples, affinity sparsity
// pattern and metric. Edges hold each unordered pair with nonzero weight;
// cost and Jacobian sum ordered pairs, hence the factor 2 in both.
class ObjectiveContext {
public:
  struct Edge {
    Eigen::Index i;
    Eigen::Index j;
    double weight;
  };

  static ObjectiveContext make(LabeledSpdDataset data, AffinityMatrix a,
                               Metric metric);

  const LabeledSpdDataset& data() const { return data_; }
  const AffinityMatrix& affinity() const { return affinity_; }
  const std::vector<Edge>& edges() const { return edges_; }
  Metric metric() const { return metric_; }
  Eigen::Index ambient_dim() const { return data_.dim(); }

private:
  ObjectiveContext(LabeledSpdDataset data, AffinityMatrix a, Metric metric,
                   std::vector<Edge> edges)
      : data_(std::move(data)), affinity_(std::move(a)), metric_(metric),
        edges_(std::move(edges)) {}
  LabeledSpdDataset data_;
  AffinityMatrix affinity_;
  Metric metric_;
  std::vector<Edge> edges_;
};

// Sum over ordered pairs of affinity * squared distance between projected
// samples. w may be any full-column-rank n x m matrix (finite-difference
// probes step off the orthonormal manifold).
double cost(const ObjectiveContext& ctx, const Eigen::MatrixXd& w);

// Euclidean Jacobian dL/dW, n x m.
Eigen::MatrixXd cost_jacobian(const ObjectiveContext& ctx,
                              const Eigen::MatrixXd& w);

// Affinity-weighted squared distance between W^T xi W and W^T xj W. A zero
// weight short-circuits to 0 after shape validation.
double pair_cost(Metric metric, const SpdMatrix& xi, const SpdMatrix& xj,
                 double weight, const Eigen::MatrixXd& w);

// Jacobian of the pair cost with respect to W.
Eigen::MatrixXd pair_jacobian(Metric metric, const SpdMatrix& xi,
                              const SpdMatrix& xj, const Eigen::MatrixXd& w);

// d/dW of log det(W^T X W), equal to 2 X W (W^T X W)^{-1}.
Eigen::MatrixXd logdet_grad(const SpdMatrix& x, const Eigen::MatrixXd& w);

}  // namespace spdml
