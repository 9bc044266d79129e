// Shared generators for the unit tests. Everything is driven by the library
// Rng so a failing case reproduces from its seed alone.
#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "core/projection.hpp"
#include "core/rng.hpp"
#include "core/spd.hpp"

namespace testutil {

// SPD matrix with log-eigenvalue spread controlled by scale; scale ~ 1/sqrt(n)
// keeps the condition number moderate at any size.
inline spdml::SpdMatrix random_spd(spdml::Rng& rng, Eigen::Index n,
                                   double scale = 0.5) {
  return spdml::spd_exp(scale * rng.gaussian_symmetric(n));
}

// Haar-ish orthonormal n x m frame from a QR factorisation.
inline Eigen::MatrixXd random_frame(spdml::Rng& rng, Eigen::Index n,
                                    Eigen::Index m) {
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(rng.gaussian_matrix(n, n))
          .householderQ();
  return q.leftCols(m);
}

inline spdml::Projection random_projection(spdml::Rng& rng, Eigen::Index n,
                                           Eigen::Index m) {
  return spdml::Projection::make(random_frame(rng, n, m));
}

// Invertible matrix with singular values in [1/e, e].
inline Eigen::MatrixXd random_invertible(spdml::Rng& rng, Eigen::Index n) {
  const Eigen::MatrixXd q1 = random_frame(rng, n, n);
  const Eigen::MatrixXd q2 = random_frame(rng, n, n);
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i)
    d(i) = std::exp(2.0 * rng.uniform() - 1.0);
  return q1 * d.asDiagonal() * q2;
}

}  // namespace testutil
