#include <cmath>
#include <vector>

#include "core/objective.hpp"
#include "core/oracles.hpp"
#include "core/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace spdml;

namespace {

// Two-class dataset with the standard kNN affinity, the workhorse fixture.
ObjectiveContext random_context(Rng& rng, Metric metric, Eigen::Index n,
                                int samples) {
  std::vector<SpdMatrix> mats;
  std::vector<int> labels;
  for (int i = 0; i < samples; ++i) {
    mats.push_back(testutil::random_spd(rng, n, 0.4));
    labels.push_back(i % 2);
  }
  LabeledSpdDataset data =
      LabeledSpdDataset::make(std::move(mats), std::move(labels));
  AffinityMatrix a = affinity(data, 1, 1, metric);
  return ObjectiveContext::make(std::move(data), std::move(a), metric);
}

}  // namespace

TEST_SUITE("objective") {

TEST_CASE("map_spd with a truncated identity takes the leading block") {
  Rng rng(31);
  const SpdMatrix x = testutil::random_spd(rng, 4);
  const SpdMatrix mapped = map_spd(x, Projection::identity(4, 2));
  CHECK((mapped.matrix() - x.matrix().topLeftCorner(2, 2)).norm() == 0.0);
}

TEST_CASE("map_spd rejects mismatched dimensions") {
  Rng rng(33);
  const SpdMatrix x = testutil::random_spd(rng, 3);
  try {
    map_spd(x, Projection::identity(4, 2));
    FAIL("expected DimMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimMismatch);
  }
}

TEST_CASE("cost reports a numerically singular projected matrix") {
  // Nearly collinear columns push the projected condition past the cap.
  // Orthonormal projections cannot get here: interlacing keeps them at least
  // as well conditioned as their input.
  Rng rng(34);
  const ObjectiveContext ctx = random_context(rng, Metric::Airm, 3, 4);
  Eigen::MatrixXd w(3, 2);
  w << 1.0, 1.0, 0.0, 1e-13, 0.0, 0.0;
  try {
    cost(ctx, w);
    FAIL("expected SingularProjectedMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularProjectedMatrix);
  }
}

TEST_CASE("pair cost scales with the weight and vanishes at zero") {
  Rng rng(35);
  const SpdMatrix x = testutil::random_spd(rng, 4);
  const SpdMatrix y = testutil::random_spd(rng, 4);
  const Projection w = testutil::random_projection(rng, 4, 2);
  for (Metric metric : {Metric::Airm, Metric::Stein}) {
    const double base = pair_cost(metric, x, y, 1.0, w.matrix());
    const double mapped_dist =
        dist_sq(metric, map_spd(x, w), map_spd(y, w));
    CHECK(base == doctest::Approx(mapped_dist).epsilon(1e-12));
    CHECK(pair_cost(metric, x, y, -1.0, w.matrix()) ==
          doctest::Approx(-base).epsilon(1e-12));
    CHECK(pair_cost(metric, x, y, 0.0, w.matrix()) == 0.0);
    CHECK(std::abs(pair_cost(metric, x, x, 1.0, w.matrix())) < 1e-10);
  }
}

TEST_CASE("pair cost validates shapes even for zero weight") {
  Rng rng(37);
  const SpdMatrix x = testutil::random_spd(rng, 4);
  const SpdMatrix y = testutil::random_spd(rng, 3);
  const Projection w = testutil::random_projection(rng, 4, 2);
  CHECK_THROWS_AS(pair_cost(Metric::Airm, x, y, 0.0, w.matrix()), Error);
  CHECK_THROWS_AS(
      pair_cost(Metric::Airm, x, x, 0.0, Eigen::MatrixXd::Ones(3, 2)), Error);
}

TEST_CASE("scalar pair cost is blind to the projection scale") {
  // In one dimension both metrics cancel the projection exactly, so the
  // Jacobian must vanish identically; this pins the cancellation structure.
  const SpdMatrix x = SpdMatrix::make(Eigen::MatrixXd::Constant(1, 1, 2.0));
  const SpdMatrix y = SpdMatrix::make(Eigen::MatrixXd::Constant(1, 1, 5.0));
  const Eigen::MatrixXd w = Eigen::MatrixXd::Constant(1, 1, 0.8);
  for (Metric metric : {Metric::Airm, Metric::Stein}) {
    const Eigen::MatrixXd j = pair_jacobian(metric, x, y, w);
    CHECK(std::abs(j(0, 0)) < 1e-10);
  }
}

TEST_CASE("log det gradient closed forms") {
  Rng rng(39);
  // d/dW log det(W^T W) = 2 W (W^T W)^-1 = 2 W on orthonormal frames.
  const Projection w = testutil::random_projection(rng, 5, 2);
  const SpdMatrix eye = SpdMatrix::make(Eigen::MatrixXd::Identity(5, 5));
  CHECK((logdet_grad(eye, w.matrix()) - 2.0 * w.matrix()).norm() < 1e-12);
  // Square case: gradient of log det(W^T X W) at W = I is 2 I.
  const SpdMatrix x = testutil::random_spd(rng, 3);
  CHECK((logdet_grad(x, Eigen::MatrixXd::Identity(3, 3)) -
         2.0 * Eigen::MatrixXd::Identity(3, 3))
            .norm() < 1e-12);
}

TEST_CASE("log det gradient matches finite differences") {
  Rng rng(41);
  const SpdMatrix x = testutil::random_spd(rng, 5);
  const Eigen::MatrixXd w = testutil::random_frame(rng, 5, 2);
  const auto f = [&](const Eigen::MatrixXd& v) {
    return detail::logdet_cholesky(v.transpose() * x.matrix() * v);
  };
  const Eigen::MatrixXd fd = fd_jacobian(f, w, fd_default_step(w));
  CHECK((logdet_grad(x, w) - fd).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("pair jacobian matches finite differences for both metrics") {
  Rng rng(43);
  for (Metric metric : {Metric::Airm, Metric::Stein}) {
    for (int rep = 0; rep < 3; ++rep) {
      const SpdMatrix x = testutil::random_spd(rng, 5, 0.4);
      const SpdMatrix y = testutil::random_spd(rng, 5, 0.4);
      const Eigen::MatrixXd w = testutil::random_frame(rng, 5, 2);
      const auto f = [&](const Eigen::MatrixXd& v) {
        return pair_cost(metric, x, y, 1.0, v);
      };
      const Eigen::MatrixXd fd = fd_jacobian(f, w, fd_default_step(w));
      CHECK((pair_jacobian(metric, x, y, w) - fd).cwiseAbs().maxCoeff() <
            1e-6);
    }
  }
}

TEST_CASE("cost is zero without edges") {
  Rng rng(45);
  std::vector<SpdMatrix> mats;
  for (int i = 0; i < 3; ++i) mats.push_back(testutil::random_spd(rng, 3));
  LabeledSpdDataset data = LabeledSpdDataset::make(std::move(mats), {1, 2, 3});
  AffinityMatrix a = AffinityMatrix::make(Eigen::MatrixXd::Zero(3, 3));
  const ObjectiveContext ctx =
      ObjectiveContext::make(std::move(data), std::move(a), Metric::Airm);
  CHECK(ctx.edges().empty());
  const Eigen::MatrixXd w = testutil::random_frame(rng, 3, 2);
  CHECK(cost(ctx, w) == 0.0);
  CHECK(cost_jacobian(ctx, w).norm() == 0.0);
}

TEST_CASE("cost of a single within pair is twice the projected distance") {
  Rng rng(47);
  std::vector<SpdMatrix> mats;
  mats.push_back(testutil::random_spd(rng, 4));
  mats.push_back(testutil::random_spd(rng, 4));
  LabeledSpdDataset data = LabeledSpdDataset::make(mats, {1, 1});
  Eigen::Matrix2d entries = Eigen::Matrix2d::Zero();
  entries(0, 1) = entries(1, 0) = 1.0;
  const Projection w = testutil::random_projection(rng, 4, 2);
  for (Metric metric : {Metric::Airm, Metric::Stein}) {
    const ObjectiveContext ctx = ObjectiveContext::make(
        data, AffinityMatrix::make(entries), metric);
    REQUIRE(ctx.edges().size() == 1);
    const double expected =
        2.0 * dist_sq(metric, map_spd(mats[0], w), map_spd(mats[1], w));
    CHECK(cost(ctx, w.matrix()) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("cost jacobian matches finite differences for both metrics") {
  Rng rng(49);
  for (Metric metric : {Metric::Airm, Metric::Stein}) {
    const ObjectiveContext ctx = random_context(rng, metric, 5, 6);
    const Eigen::MatrixXd w = testutil::random_frame(rng, 5, 2);
    const auto f = [&](const Eigen::MatrixXd& v) { return cost(ctx, v); };
    const Eigen::MatrixXd fd = fd_jacobian(f, w, fd_default_step(w));
    CHECK((cost_jacobian(ctx, w) - fd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("cost is invariant under rotations of the frame") {
  Rng rng(51);
  const ObjectiveContext ctx = random_context(rng, Metric::Airm, 5, 6);
  const Eigen::MatrixXd w = testutil::random_frame(rng, 5, 3);
  const double base = cost(ctx, w);
  for (int rep = 0; rep < 3; ++rep) {
    const Eigen::MatrixXd rot = testutil::random_frame(rng, 3, 3);
    CHECK(std::abs(cost(ctx, w * rot) - base) <
          1e-10 * std::max(1.0, std::abs(base)));
  }
}

TEST_CASE("cost is invariant under any full-rank reparametrisation") {
  // Both metrics see W and W T as the same subspace for invertible T.
  Rng rng(53);
  for (Metric metric : {Metric::Airm, Metric::Stein}) {
    const ObjectiveContext ctx = random_context(rng, metric, 5, 6);
    const Eigen::MatrixXd w = testutil::random_frame(rng, 5, 2);
    const Eigen::MatrixXd t = testutil::random_invertible(rng, 2);
    const double base = cost(ctx, w);
    CHECK(std::abs(cost(ctx, w * t) - base) <
          1e-8 * std::max(1.0, std::abs(base)));
  }
}

TEST_CASE("context extracts each unordered pair once") {
  Rng rng(55);
  std::vector<SpdMatrix> mats;
  for (int i = 0; i < 4; ++i) mats.push_back(testutil::random_spd(rng, 3));
  LabeledSpdDataset data =
      LabeledSpdDataset::make(std::move(mats), {1, 1, 2, 2});
  Eigen::Matrix4d entries = Eigen::Matrix4d::Zero();
  entries(0, 1) = entries(1, 0) = 1.0;
  entries(2, 3) = entries(3, 2) = 1.0;
  entries(0, 2) = entries(2, 0) = -1.0;
  const ObjectiveContext ctx = ObjectiveContext::make(
      data, AffinityMatrix::make(entries), Metric::Stein);
  REQUIRE(ctx.edges().size() == 3);
  for (const auto& edge : ctx.edges()) {
    CHECK(edge.i < edge.j);
    CHECK(edge.weight == entries(edge.i, edge.j));
  }
  // The cost equals the ordered-pair sum: twice the edge sum.
  const Projection w = testutil::random_projection(rng, 3, 2);
  double expected = 0.0;
  for (const auto& edge : ctx.edges())
    expected += 2.0 * pair_cost(Metric::Stein, data.matrix(edge.i),
                                data.matrix(edge.j), edge.weight, w.matrix());
  CHECK(cost(ctx, w.matrix()) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("affinity size must match the dataset") {
  Rng rng(57);
  std::vector<SpdMatrix> mats;
  for (int i = 0; i < 3; ++i) mats.push_back(testutil::random_spd(rng, 3));
  LabeledSpdDataset data = LabeledSpdDataset::make(std::move(mats), {1, 1, 2});
  try {
    ObjectiveContext::make(data,
                           AffinityMatrix::make(Eigen::MatrixXd::Zero(2, 2)),
                           Metric::Airm);
    FAIL("expected DimMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimMismatch);
  }
}

}  // TEST_SUITE
