// Region covariance descriptors built from observation matrices.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "core/projection.hpp"
#include "core/spd.hpp"
#include "core/types.hpp"

namespace spdml {

// n features observed r times, one observation per column (n x r).
class ObservationMatrix {
public:
  static ObservationMatrix make(const Eigen::MatrixXd& data);

  const Eigen::MatrixXd& data() const { return data_; }
  Eigen::Index n_features() const { return data_.rows(); }
  Eigen::Index n_obs() const { return data_.cols(); }

private:
  explicit ObservationMatrix(Eigen::MatrixXd data) : data_(std::move(data)) {}
  Eigen::MatrixXd data_;
};

// Centering factor J of size r x r with J 1 = 0, scaled so that for an
// observation matrix O the product (O J)(O J)^T equals the covariance of the
// columns of O normalised by r - 1.
Eigen::MatrixXd centering_factor(Eigen::Index r);

// Sample covariance of the columns, normalised by r - 1 (two-pass: centre
// first, then accumulate outer products). RankDeficient when r <= n or the
// observations are degenerate, because the result must be positive definite.
SpdMatrix rcm(const ObservationMatrix& obs);

// Covariance of the projected observations W^T O. Well defined whenever
// r > m even if the full n x n covariance is singular; the projection is
// applied to the data before any covariance is formed.
SpdMatrix rcm_projected(const ObservationMatrix& obs, const Projection& w);

// Block-diagonal concatenation. The result is SPD iff every part is.
SpdMatrix block_diag_concat(const std::vector<SpdMatrix>& parts);

}  // namespace spdml
