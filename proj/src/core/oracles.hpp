// Independent reference computations used to cross-check the analytic code
// paths: finite differences, the scalar two-metric comparison curve and a
// brute-force neighbour search. None of them share code with the routines
// they are meant to verify.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "core/types.hpp"

namespace spdml {

// Central-difference Jacobian of a scalar function of a matrix.
Eigen::MatrixXd fd_jacobian(
    const std::function<double(const Eigen::MatrixXd&)>& f,
    const Eigen::MatrixXd& w, double step);

// Step scaled to the argument: 1e-6 * max(1, ||w||_F).
double fd_default_step(const Eigen::MatrixXd& w);

struct RatioCurvePoint {
  double t;
  double airm;   // squared geodesic distance
  double stein;  // divergence
  double ratio;  // airm / stein
};

// Distances between the identity and exp(diag(t * direction)) for each t.
// As t shrinks both metrics vanish and their ratio approaches a constant.
// t values must be positive and strictly decreasing; the direction must be
// a nonzero vector of the given dimension.
std::vector<RatioCurvePoint> ratio_curve(int dim,
                                         const Eigen::VectorXd& direction,
                                         const std::vector<double>& t_grid);

// Nearest-neighbour lists by exhaustive scan over a precomputed distance
// matrix: for each sample, the nu closest others with the same label
// (same_class) or a different label (!same_class). Ordered by distance,
// ties towards the lower index; short candidate lists are returned whole.
std::vector<std::vector<int>> brute_knn(const Eigen::MatrixXd& dist,
                                        const std::vector<int>& labels, int nu,
                                        bool same_class);

}  // namespace spdml
