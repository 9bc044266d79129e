// Symmetric positive definite matrices and the two metrics on them.
#pragma once

#include <Eigen/Dense>

#include "core/types.hpp"

namespace spdml {

// A validated SPD matrix. Construction rejects non-square, asymmetric (above
// a relative tolerance) and non-positive-definite input, then symmetrizes
// exactly so downstream code can rely on X == X^T bit for bit.
class SpdMatrix {
public:
  static SpdMatrix make(const Eigen::MatrixXd& x);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

private:
  explicit SpdMatrix(Eigen::MatrixXd m) : matrix_(std::move(m)) {}
  Eigen::MatrixXd matrix_;
};

// Matrix logarithm of an SPD matrix; the result is symmetric.
Eigen::MatrixXd spd_log(const SpdMatrix& x);

// Matrix exponential of a symmetric matrix; the result is SPD.
SpdMatrix spd_exp(const Eigen::MatrixXd& sym);

// Riemannian inner product <v, w> at base point p: tr(p^-1 v p^-1 w).
// v and w must be symmetric and match the dimension of p.
double airm_inner(const SpdMatrix& p, const Eigen::MatrixXd& v,
                  const Eigen::MatrixXd& w);

// Squared geodesic distance ||log(y^-1/2 x y^-1/2)||_F^2.
double airm_dist_sq(const SpdMatrix& x, const SpdMatrix& y);

// Symmetric Stein divergence log det((x+y)/2) - log det(x y) / 2.
double stein_dist_sq(const SpdMatrix& x, const SpdMatrix& y);

double dist_sq(Metric metric, const SpdMatrix& x, const SpdMatrix& y);

namespace detail {

// max |x - x^T| <= tol * max |x| with tol = 1e-10.
bool is_symmetric(const Eigen::MatrixXd& x);

// log det of a symmetric positive definite matrix via Cholesky. Throws
// NumericalFailure when the factorisation breaks down.
double logdet_cholesky(const Eigen::MatrixXd& x);

// Eigendecomposition of a symmetric matrix. Throws NumericalFailure if the
// solver does not converge.
void sym_eig(const Eigen::MatrixXd& x, Eigen::VectorXd& eigenvalues,
             Eigen::MatrixXd& eigenvectors);

}  // namespace detail

}  // namespace spdml
