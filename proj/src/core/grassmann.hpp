// Geometry of orthonormal frames up to rotation: tangent vectors, geodesics,
// parallel transport and principal angles.
#pragma once

#include <Eigen/Dense>

#include "core/projection.hpp"
#include "core/types.hpp"

namespace spdml {

// A horizontal tangent vector at a base frame: W^T H = 0.
class TangentDirection {
public:
  static TangentDirection make(const Projection& base,
                               const Eigen::MatrixXd& dir);

  const Projection& base() const { return base_; }
  const Eigen::MatrixXd& dir() const { return dir_; }
  double norm() const { return dir_.norm(); }

private:
  TangentDirection(Projection base, Eigen::MatrixXd dir)
      : base_(std::move(base)), dir_(std::move(dir)) {}
  Projection base_;
  Eigen::MatrixXd dir_;
};

// Horizontal component (I - W W^T) D of an arbitrary n x m matrix.
TangentDirection project_to_tangent(const Projection& w,
                                    const Eigen::MatrixXd& d);

// Geodesic t -> W V cos(S t) V^T + U sin(S t) V^T from the thin SVD
// U S V^T of the tangent direction. Built once, then evaluated at many t
// (line search probes) and used to transport tangent vectors.
class GeodesicPath {
public:
  explicit GeodesicPath(const TangentDirection& h);

  const Projection& origin() const { return origin_; }

  // Frame at parameter t, validated orthonormal.
  Projection position(double t) const;

  // Same frame without the orthonormality re-check, for search probes.
  Eigen::MatrixXd position_raw(double t) const;

  // Parallel transport of a tangent vector at the origin to position(t).
  // `at` must be the frame returned by position(t). The result is
  // re-projected onto the tangent space at `at` to shed roundoff.
  TangentDirection transport(const TangentDirection& h, double t,
                             const Projection& at) const;

  // Largest singular value of the direction: rotation speed of the fastest
  // principal angle, hence sigma_max * t is the largest rotation at t.
  double max_rotation_rate() const { return sigma_.size() ? sigma_(0) : 0.0; }

private:
  Projection origin_;
  Eigen::MatrixXd u_;    // n x m
  Eigen::MatrixXd v_;    // m x m, full
  Eigen::MatrixXd wv_;   // W V
  Eigen::VectorXd sigma_;
};

// One-shot geodesic step along a tangent direction.
Projection geodesic_step(const TangentDirection& h, double t);

// Transport `h` along the geodesic generated by `along` (both tangent at the
// same frame) for parameter t. BaseMismatch if the bases differ.
TangentDirection parallel_transport(const TangentDirection& h,
                                    const TangentDirection& along, double t);

// Largest principal angle between the column spaces of two orthonormal
// frames, in radians. Uses sin(theta) = singular values of (I - B B^T) A,
// which stays accurate for angles far below what acos can resolve.
double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace spdml
