#include "core/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spdml {

namespace {

void check_same_base(const Projection& a, const Projection& b,
                     const char* what) {
  if (a.ambient_dim() != b.ambient_dim() ||
      a.subspace_dim() != b.subspace_dim() ||
      (a.matrix() - b.matrix()).cwiseAbs().maxCoeff() > 1e-12)
    throw Error(ErrorCode::BaseMismatch, std::string(what) +
                                             " requires tangent vectors "
                                             "anchored at the same frame");
}

}  // namespace

TangentDirection TangentDirection::make(const Projection& base,
                                        const Eigen::MatrixXd& dir) {
  if (dir.rows() != base.ambient_dim() || dir.cols() != base.subspace_dim())
    throw Error(ErrorCode::DimMismatch,
                "tangent direction must have the base frame's shape");
  if (!dir.allFinite())
    throw Error(ErrorCode::InvalidParams,
                "tangent direction contains non-finite entries");
  const double vertical = (base.matrix().transpose() * dir).norm();
  if (vertical > 1e-8 * dir.norm())
    throw Error(ErrorCode::InvalidParams,
                "direction is not horizontal: |W^T H| reaches " +
                    std::to_string(vertical));
  return TangentDirection(base, dir);
}

TangentDirection project_to_tangent(const Projection& w,
                                    const Eigen::MatrixXd& d) {
  if (d.rows() != w.ambient_dim() || d.cols() != w.subspace_dim())
    throw Error(ErrorCode::DimMismatch,
                "direction must have the frame's shape");
  // Applied twice: one pass leaves a vertical residual of order eps * |D|,
  // which can dominate when D is almost entirely vertical.
  Eigen::MatrixXd horizontal = d - w.matrix() * (w.matrix().transpose() * d);
  horizontal -= w.matrix() * (w.matrix().transpose() * horizontal);
  return TangentDirection::make(w, horizontal);
}

GeodesicPath::GeodesicPath(const TangentDirection& h) : origin_(h.base()) {
  // Full V keeps position(0) == origin exactly even when the direction is
  // rank deficient; zero singular values then contribute cos(0) = 1 terms
  // and the corresponding U columns never enter (sin(0) = 0).
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      h.dir(), Eigen::ComputeThinU | Eigen::ComputeFullV);
  u_ = svd.matrixU();
  v_ = svd.matrixV();
  sigma_ = svd.singularValues();
  wv_ = origin_.matrix() * v_;
}

Eigen::MatrixXd GeodesicPath::position_raw(double t) const {
  const Eigen::Index m = origin_.subspace_dim();
  Eigen::VectorXd cos_t = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd sin_t = Eigen::VectorXd::Zero(m);
  for (Eigen::Index k = 0; k < sigma_.size(); ++k) {
    cos_t(k) = std::cos(sigma_(k) * t);
    sin_t(k) = std::sin(sigma_(k) * t);
  }
  return (wv_ * cos_t.asDiagonal() + u_ * sin_t.asDiagonal()) * v_.transpose();
}

Projection GeodesicPath::position(double t) const {
  return Projection::make(position_raw(t));
}

TangentDirection GeodesicPath::transport(const TangentDirection& h, double t,
                                         const Projection& at) const {
  check_same_base(h.base(), origin_, "transport");
  const Eigen::Index m = origin_.subspace_dim();
  Eigen::VectorXd cos_t = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd sin_t = Eigen::VectorXd::Zero(m);
  for (Eigen::Index k = 0; k < sigma_.size(); ++k) {
    cos_t(k) = std::cos(sigma_(k) * t);
    sin_t(k) = std::sin(sigma_(k) * t);
  }
  // tau H = H + (-W V sin(S t) + U (cos(S t) - I)) U^T H, the usual
  // (-W V sin U^T + U cos U^T + (I - U U^T)) H with the identity parts
  // folded into H so that zero singular values drop out exactly.
  const Eigen::MatrixXd uth = u_.transpose() * h.dir();
  Eigen::MatrixXd moved =
      h.dir() +
      (u_ * (cos_t.array() - 1.0).matrix().asDiagonal() -
       wv_ * sin_t.asDiagonal()) *
          uth;
  // Shed the O(eps) vertical component picked up in floating point; applied
  // twice so the residual is negligible even relative to a small result.
  moved -= at.matrix() * (at.matrix().transpose() * moved);
  moved -= at.matrix() * (at.matrix().transpose() * moved);
  return TangentDirection::make(at, moved);
}

Projection geodesic_step(const TangentDirection& h, double t) {
  return GeodesicPath(h).position(t);
}

TangentDirection parallel_transport(const TangentDirection& h,
                                    const TangentDirection& along, double t) {
  check_same_base(h.base(), along.base(), "parallel transport");
  const GeodesicPath path(along);
  return path.transport(h, t, path.position(t));
}

double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimMismatch,
                "principal angles need frames of equal shape");
  const Eigen::MatrixXd residual = a - b * (b.transpose() * a);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
  const double sine = std::min(1.0, svd.singularValues().maxCoeff());
  return std::asin(sine);
}

}  // namespace spdml
