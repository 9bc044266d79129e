// Orthonormal projection n x m, the variable being optimised.
#pragma once

#include <Eigen/Dense>

#include "core/types.hpp"

namespace spdml {

// Validated orthonormal frame: ||W^T W - I_m||_F <= 1e-8. The object stores
// W exactly as given; validation never renormalises, so orthonormality drift
// in an iterative process stays observable.
class Projection {
public:
  static Projection make(const Eigen::MatrixXd& w);

  // Leading m columns of the identity, the canonical starting frame.
  static Projection identity(Eigen::Index n, Eigen::Index m);

  const Eigen::MatrixXd& matrix() const { return w_; }
  Eigen::Index ambient_dim() const { return w_.rows(); }
  Eigen::Index subspace_dim() const { return w_.cols(); }

  // Frobenius norm of W^T W - I.
  static double orthonormality_gap(const Eigen::MatrixXd& w);

private:
  explicit Projection(Eigen::MatrixXd w) : w_(std::move(w)) {}
  Eigen::MatrixXd w_;
};

}  // namespace spdml
