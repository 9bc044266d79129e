#include "core/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "core/spd.hpp"

namespace spdml {

Eigen::MatrixXd fd_jacobian(
    const std::function<double(const Eigen::MatrixXd&)>& f,
    const Eigen::MatrixXd& w, double step) {
  if (!(step > 0.0))
    throw Error(ErrorCode::InvalidParams, "finite difference step must be positive");
  Eigen::MatrixXd jac(w.rows(), w.cols());
  Eigen::MatrixXd probe = w;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      probe(i, j) = w(i, j) + step;
      const double forward = f(probe);
      probe(i, j) = w(i, j) - step;
      const double backward = f(probe);
      probe(i, j) = w(i, j);
      jac(i, j) = (forward - backward) / (2.0 * step);
    }
  }
  return jac;
}

double fd_default_step(const Eigen::MatrixXd& w) {
  return 1e-6 * std::max(1.0, w.norm());
}

std::vector<RatioCurvePoint> ratio_curve(int dim,
                                         const Eigen::VectorXd& direction,
                                         const std::vector<double>& t_grid) {
  if (dim < 1 || direction.size() != dim)
    throw Error(ErrorCode::InvalidParams,
                "direction must be a vector of the stated dimension");
  if (direction.norm() == 0.0)
    throw Error(ErrorCode::InvalidParams, "direction must be nonzero");
  if (t_grid.empty())
    throw Error(ErrorCode::InvalidParams, "t grid must be non-empty");
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > 0.0))
      throw Error(ErrorCode::InvalidParams, "t values must be positive");
    if (k > 0 && !(t_grid[k] < t_grid[k - 1]))
      throw Error(ErrorCode::InvalidParams,
                  "t values must be strictly decreasing");
  }

  const SpdMatrix identity =
      SpdMatrix::make(Eigen::MatrixXd::Identity(dim, dim));
  std::vector<RatioCurvePoint> curve;
  curve.reserve(t_grid.size());
  for (double t : t_grid) {
    const SpdMatrix y = SpdMatrix::make(
        (t * direction).array().exp().matrix().asDiagonal().toDenseMatrix());
    RatioCurvePoint point;
    point.t = t;
    point.airm = airm_dist_sq(y, identity);
    point.stein = stein_dist_sq(y, identity);
    if (!(point.stein > 0.0))
      throw Error(ErrorCode::NumericalFailure,
                  "divergence vanished; t is too small to compare metrics");
    point.ratio = point.airm / point.stein;
    curve.push_back(point);
  }
  return curve;
}

std::vector<std::vector<int>> brute_knn(const Eigen::MatrixXd& dist,
                                        const std::vector<int>& labels, int nu,
                                        bool same_class) {
  const int p = static_cast<int>(labels.size());
  if (dist.rows() != p || dist.cols() != p)
    throw Error(ErrorCode::DimMismatch,
                "distance matrix does not match the label count");
  if (nu < 1)
    throw Error(ErrorCode::InvalidParams, "neighbour count must be positive");

  std::vector<std::vector<int>> lists(p);
  for (int i = 0; i < p; ++i) {
    std::vector<std::pair<double, int>> candidates;
    for (int j = 0; j < p; ++j) {
      if (j == i) continue;
      if ((labels[j] == labels[i]) == same_class)
        candidates.emplace_back(dist(i, j), j);
    }
    std::sort(candidates.begin(), candidates.end());
    const std::size_t take =
        std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(nu));
    for (std::size_t k = 0; k < take; ++k)
      lists[i].push_back(candidates[k].second);
  }
  return lists;
}

}  // namespace spdml
