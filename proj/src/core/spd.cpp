#include "core/spd.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace spdml {

namespace detail {

bool is_symmetric(const Eigen::MatrixXd& x) {
  const double scale = x.cwiseAbs().maxCoeff();
  const double gap = (x - x.transpose()).cwiseAbs().maxCoeff();
  return gap <= 1e-10 * scale;
}

double logdet_cholesky(const Eigen::MatrixXd& x) {
  Eigen::LLT<Eigen::MatrixXd> llt(x);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NumericalFailure,
                "Cholesky factorisation failed; matrix is numerically "
                "indefinite");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

void sym_eig(const Eigen::MatrixXd& x, Eigen::VectorXd& eigenvalues,
             Eigen::MatrixXd& eigenvectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NumericalFailure,
                "symmetric eigensolver did not converge");
  eigenvalues = solver.eigenvalues();
  eigenvectors = solver.eigenvectors();
}

}  // namespace detail

SpdMatrix SpdMatrix::make(const Eigen::MatrixXd& x) {
  if (x.rows() != x.cols())
    throw Error(ErrorCode::NotSquare,
                "expected a square matrix, got " + std::to_string(x.rows()) +
                    "x" + std::to_string(x.cols()));
  if (x.rows() == 0)
    throw Error(ErrorCode::NotSquare, "matrix is empty");
  if (!x.allFinite())
    throw Error(ErrorCode::NotPositiveDefinite,
                "matrix contains non-finite entries");
  if (!detail::is_symmetric(x))
    throw Error(ErrorCode::NotSymmetric,
                "asymmetry exceeds 1e-10 relative to the largest entry");

  Eigen::MatrixXd sym = 0.5 * (x + x.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NumericalFailure,
                "symmetric eigensolver did not converge");
  const double min_eig = solver.eigenvalues().minCoeff();
  const double max_eig = solver.eigenvalues().maxCoeff();
  const double floor = static_cast<double>(sym.rows()) *
                       std::numeric_limits<double>::epsilon() * max_eig;
  if (!(min_eig > floor))
    throw Error(ErrorCode::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(min_eig) +
                    " is not above the positivity floor " +
                    std::to_string(floor));
  return SpdMatrix(std::move(sym));
}

Eigen::MatrixXd spd_log(const SpdMatrix& x) {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  detail::sym_eig(x.matrix(), values, vectors);
  return vectors * values.array().log().matrix().asDiagonal() *
         vectors.transpose();
}

SpdMatrix spd_exp(const Eigen::MatrixXd& sym) {
  if (sym.rows() != sym.cols() || sym.rows() == 0)
    throw Error(ErrorCode::NotSquare, "expected a non-empty square matrix");
  if (!detail::is_symmetric(sym))
    throw Error(ErrorCode::NotSymmetric,
                "matrix exponential input must be symmetric");
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  detail::sym_eig(0.5 * (sym + sym.transpose()), values, vectors);
  return SpdMatrix::make(vectors * values.array().exp().matrix().asDiagonal() *
                         vectors.transpose());
}

double airm_inner(const SpdMatrix& p, const Eigen::MatrixXd& v,
                  const Eigen::MatrixXd& w) {
  if (v.rows() != p.dim() || v.cols() != p.dim() || w.rows() != p.dim() ||
      w.cols() != p.dim())
    throw Error(ErrorCode::BaseMismatch,
                "tangent vectors must match the base point dimension");
  if (!detail::is_symmetric(v) || !detail::is_symmetric(w))
    throw Error(ErrorCode::NotSymmetric, "tangent vectors must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(p.matrix());
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NumericalFailure,
                "Cholesky factorisation of the base point failed");
  const Eigen::MatrixXd pv = llt.solve(v);
  const Eigen::MatrixXd pw = llt.solve(w);
  return (pv * pw).trace();
}

double airm_dist_sq(const SpdMatrix& x, const SpdMatrix& y) {
  if (x.dim() != y.dim())
    throw Error(ErrorCode::DimMismatch,
                "distance requires matrices of equal dimension");
  Eigen::VectorXd y_values;
  Eigen::MatrixXd y_vectors;
  detail::sym_eig(y.matrix(), y_values, y_vectors);
  const Eigen::MatrixXd y_inv_sqrt =
      y_vectors * y_values.array().rsqrt().matrix().asDiagonal() *
      y_vectors.transpose();
  const Eigen::MatrixXd whitened = y_inv_sqrt * x.matrix() * y_inv_sqrt;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  detail::sym_eig(0.5 * (whitened + whitened.transpose()), values, vectors);
  if (values.minCoeff() <= 0.0)
    throw Error(ErrorCode::NumericalFailure,
                "whitened matrix lost positive definiteness");
  return values.array().log().square().sum();
}

double stein_dist_sq(const SpdMatrix& x, const SpdMatrix& y) {
  if (x.dim() != y.dim())
    throw Error(ErrorCode::DimMismatch,
                "distance requires matrices of equal dimension");
  const double logdet_mid =
      detail::logdet_cholesky(0.5 * (x.matrix() + y.matrix()));
  const double logdet_x = detail::logdet_cholesky(x.matrix());
  const double logdet_y = detail::logdet_cholesky(y.matrix());
  return logdet_mid - 0.5 * (logdet_x + logdet_y);
}

double dist_sq(Metric metric, const SpdMatrix& x, const SpdMatrix& y) {
  return metric == Metric::Airm ? airm_dist_sq(x, y) : stein_dist_sq(x, y);
}

}  // namespace spdml
