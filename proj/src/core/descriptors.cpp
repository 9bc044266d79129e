#include "core/descriptors.hpp"

#include <cmath>
#include <string>

namespace spdml {

ObservationMatrix ObservationMatrix::make(const Eigen::MatrixXd& data) {
  if (data.rows() < 1 || data.cols() < 1)
    throw Error(ErrorCode::InvalidParams,
                "observation matrix must have at least one feature and one "
                "observation");
  if (!data.allFinite())
    throw Error(ErrorCode::InvalidParams,
                "observation matrix contains non-finite entries");
  return ObservationMatrix(data);
}

Eigen::MatrixXd centering_factor(Eigen::Index r) {
  if (r < 2)
    throw Error(ErrorCode::InvalidParams,
                "centering factor requires at least two observations");
  const double n = static_cast<double>(r);
  // (I - 11^T/r) / sqrt(r - 1): idempotent centering followed by the sample
  // normalisation, so (O J)(O J)^T is the r - 1 normalised covariance.
  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(r, r);
  j.array() -= 1.0 / n;
  j /= std::sqrt(n - 1.0);
  return j;
}

namespace {

// Two-pass covariance of the columns of data, normalised by r - 1.
Eigen::MatrixXd column_covariance(const Eigen::MatrixXd& data) {
  const Eigen::VectorXd mean = data.rowwise().mean();
  const Eigen::MatrixXd centred = data.colwise() - mean;
  return centred * centred.transpose() /
         static_cast<double>(data.cols() - 1);
}

SpdMatrix covariance_as_spd(const Eigen::MatrixXd& cov, Eigen::Index r) {
  try {
    return SpdMatrix::make(cov);
  } catch (const Error& error) {
    if (error.code() == ErrorCode::NotPositiveDefinite)
      throw Error(ErrorCode::RankDeficient,
                  "covariance of " + std::to_string(r) +
                      " observations in dimension " +
                      std::to_string(cov.rows()) +
                      " is not positive definite");
    throw;
  }
}

}  // namespace

SpdMatrix rcm(const ObservationMatrix& obs) {
  const Eigen::Index n = obs.n_features();
  const Eigen::Index r = obs.n_obs();
  if (r <= n)
    throw Error(ErrorCode::RankDeficient,
                "covariance needs more observations than features (" +
                    std::to_string(r) + " <= " + std::to_string(n) + ")");
  return covariance_as_spd(column_covariance(obs.data()), r);
}

SpdMatrix rcm_projected(const ObservationMatrix& obs, const Projection& w) {
  if (w.ambient_dim() != obs.n_features())
    throw Error(ErrorCode::DimMismatch,
                "projection rows (" + std::to_string(w.ambient_dim()) +
                    ") must match the feature count (" +
                    std::to_string(obs.n_features()) + ")");
  const Eigen::Index m = w.subspace_dim();
  const Eigen::Index r = obs.n_obs();
  if (r <= m)
    throw Error(ErrorCode::RankDeficient,
                "projected covariance needs more observations than target "
                "dimensions (" +
                    std::to_string(r) + " <= " + std::to_string(m) + ")");
  const Eigen::MatrixXd projected = w.matrix().transpose() * obs.data();
  return covariance_as_spd(column_covariance(projected), r);
}

SpdMatrix block_diag_concat(const std::vector<SpdMatrix>& parts) {
  if (parts.empty())
    throw Error(ErrorCode::EmptyList,
                "block-diagonal concatenation of an empty list");
  Eigen::Index total = 0;
  for (const SpdMatrix& part : parts) total += part.dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(total, total);
  Eigen::Index offset = 0;
  for (const SpdMatrix& part : parts) {
    out.block(offset, offset, part.dim(), part.dim()) = part.matrix();
    offset += part.dim();
  }
  return SpdMatrix::make(out);
}

}  // namespace spdml
