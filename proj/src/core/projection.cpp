#include "core/projection.hpp"

#include <string>

namespace spdml {

double Projection::orthonormality_gap(const Eigen::MatrixXd& w) {
  const Eigen::MatrixXd gram = w.transpose() * w;
  return (gram - Eigen::MatrixXd::Identity(w.cols(), w.cols())).norm();
}

Projection Projection::make(const Eigen::MatrixXd& w) {
  if (w.rows() < 1 || w.cols() < 1)
    throw Error(ErrorCode::InvalidParams, "projection must be non-empty");
  if (w.cols() > w.rows())
    throw Error(ErrorCode::InvalidParams,
                "projection has more columns than rows (" +
                    std::to_string(w.cols()) + " > " +
                    std::to_string(w.rows()) + ")");
  if (!w.allFinite())
    throw Error(ErrorCode::InvalidParams,
                "projection contains non-finite entries");
  const double gap = orthonormality_gap(w);
  if (gap > 1e-8)
    throw Error(ErrorCode::InvalidParams,
                "projection is not orthonormal; W^T W deviates from the "
                "identity by " +
                    std::to_string(gap));
  return Projection(w);
}

Projection Projection::identity(Eigen::Index n, Eigen::Index m) {
  if (m < 1 || m > n)
    throw Error(ErrorCode::InvalidParams,
                "identity frame requires 1 <= m <= n");
  return Projection(Eigen::MatrixXd::Identity(n, m));
}

}  // namespace spdml
