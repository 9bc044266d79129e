#include "core/checks.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "core/affinity.hpp"
#include "core/descriptors.hpp"
#include "core/grassmann.hpp"
#include "core/objective.hpp"
#include "core/optimizer.hpp"
#include "core/oracles.hpp"
#include "core/pipeline.hpp"
#include "core/projection.hpp"
#include "core/rng.hpp"
#include "core/spd.hpp"

namespace spdml {

namespace {

SpdMatrix random_spd(Rng& rng, Eigen::Index n, double scale = 1.0) {
  return spd_exp(scale * rng.gaussian_symmetric(n));
}

Projection random_frame(Rng& rng, Eigen::Index n, Eigen::Index m) {
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(rng.gaussian_matrix(n, m))
          .householderQ() *
      Eigen::MatrixXd::Identity(n, m);
  return Projection::make(q);
}

// Largest deviation relative to the largest reference entry.
double max_rel_gap(const Eigen::MatrixXd& value,
                   const Eigen::MatrixXd& reference) {
  const double scale = std::max(1e-12, reference.cwiseAbs().maxCoeff());
  return (value - reference).cwiseAbs().maxCoeff() / scale;
}

// A small labelled problem for the objective-level checks.
ObjectiveContext small_context(Rng& rng, Metric metric, Eigen::Index n,
                               int per_class) {
  std::vector<SpdMatrix> xs;
  std::vector<int> ys;
  for (int c = 0; c < 2; ++c) {
    const Eigen::MatrixXd centre = rng.gaussian_symmetric(n);
    for (int s = 0; s < per_class; ++s) {
      xs.push_back(spd_exp(centre + 0.4 * rng.gaussian_symmetric(n)));
      ys.push_back(c);
    }
  }
  auto data = LabeledSpdDataset::make(std::move(xs), std::move(ys));
  auto a = affinity(data, 1, 1, metric);
  return ObjectiveContext::make(std::move(data), std::move(a), metric);
}

}  // namespace

std::vector<CheckResult> run_verification_suite(std::uint64_t seed) {
  std::vector<CheckResult> results;
  auto report = [&](const std::string& name, double measured,
                    double threshold) {
    results.push_back({name, measured, threshold, measured <= threshold});
  };

  Rng rng(seed);

  // Distances are unchanged by a congruence with any invertible matrix.
  {
    double worst_airm = 0.0, worst_stein = 0.0;
    for (int k = 0; k < 5; ++k) {
      const SpdMatrix x = random_spd(rng, 6);
      const SpdMatrix y = random_spd(rng, 6);
      const Eigen::MatrixXd map = rng.gaussian_matrix(6, 6);
      const SpdMatrix xm = SpdMatrix::make(map * x.matrix() * map.transpose());
      const SpdMatrix ym = SpdMatrix::make(map * y.matrix() * map.transpose());
      const double airm = airm_dist_sq(x, y);
      const double stein = stein_dist_sq(x, y);
      worst_airm = std::max(
          worst_airm, std::abs(airm_dist_sq(xm, ym) - airm) / airm);
      worst_stein = std::max(
          worst_stein, std::abs(stein_dist_sq(xm, ym) - stein) / stein);
    }
    report("airm_affine_invariance", worst_airm, 1e-8);
    report("stein_affine_invariance", worst_stein, 1e-8);
  }

  // Symmetry in the arguments and zero self-distance.
  {
    double worst_sym = 0.0, worst_self = 0.0;
    for (int k = 0; k < 4; ++k) {
      const SpdMatrix x = random_spd(rng, 5);
      const SpdMatrix y = random_spd(rng, 5);
      for (Metric metric : {Metric::Airm, Metric::Stein}) {
        const double d = dist_sq(metric, x, y);
        worst_sym = std::max(worst_sym,
                             std::abs(dist_sq(metric, y, x) - d) / d);
        worst_self = std::max(worst_self, std::abs(dist_sq(metric, x, x)));
      }
    }
    report("metric_symmetry", worst_sym, 1e-10);
    report("self_distance_zero", worst_self, 1e-12);
  }

  // For nearby matrices the squared geodesic distance approaches eight times
  // the divergence, so the length scale between the metrics tends to
  // sqrt(8) = 2.8284271...
  {
    Eigen::VectorXd direction(4);
    direction << 1.0, -0.6, 0.3, 0.9;
    const auto curve = ratio_curve(4, direction, {1e-2});
    report("metric_ratio_limit", std::abs(curve[0].ratio - 8.0), 1e-3);
    report("metric_length_scale_vs_2.8284271",
           std::abs(std::sqrt(curve[0].ratio) - 2.0 * std::sqrt(2.0)), 1e-4);
  }

  // Analytic derivatives against central differences.
  {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      const SpdMatrix x = random_spd(rng, 7);
      const Eigen::MatrixXd w = rng.gaussian_matrix(7, 3);
      const Eigen::MatrixXd fd = fd_jacobian(
          [&](const Eigen::MatrixXd& p) {
            return std::log((p.transpose() * x.matrix() * p).determinant());
          },
          w, fd_default_step(w));
      worst = std::max(worst, max_rel_gap(logdet_grad(x, w), fd));
    }
    report("logdet_grad_vs_fd", worst, 1e-5);
  }
  for (Metric metric : {Metric::Stein, Metric::Airm}) {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      const SpdMatrix xi = random_spd(rng, 6);
      const SpdMatrix xj = random_spd(rng, 6);
      const Eigen::MatrixXd w = rng.gaussian_matrix(6, 2);
      const Eigen::MatrixXd fd = fd_jacobian(
          [&](const Eigen::MatrixXd& p) {
            return pair_cost(metric, xi, xj, 1.0, p);
          },
          w, fd_default_step(w));
      worst = std::max(worst, max_rel_gap(pair_jacobian(metric, xi, xj, w), fd));
    }
    report(std::string(metric_name(metric)) + "_pair_jacobian_vs_fd", worst,
           1e-5);
  }
  for (Metric metric : {Metric::Stein, Metric::Airm}) {
    const ObjectiveContext ctx = small_context(rng, metric, 5, 3);
    const Eigen::MatrixXd w = rng.gaussian_matrix(5, 2);
    const Eigen::MatrixXd fd = fd_jacobian(
        [&](const Eigen::MatrixXd& p) { return cost(ctx, p); }, w,
        fd_default_step(w));
    report(std::string(metric_name(metric)) + "_cost_jacobian_vs_fd",
           max_rel_gap(cost_jacobian(ctx, w), fd), 1e-5);
  }

  // Frame machinery: steps stay orthonormal, a geodesic continued from its
  // midpoint meets the direct endpoint, transport preserves length.
  {
    double worst_ortho = 0.0, worst_angle = 0.0, worst_norm = 0.0;
    for (int k = 0; k < 10; ++k) {
      const Projection w = random_frame(rng, 8, 3);
      const TangentDirection h =
          project_to_tangent(w, rng.gaussian_matrix(8, 3));
      const TangentDirection other =
          project_to_tangent(w, rng.gaussian_matrix(8, 3));
      const double t1 = 0.2 + 0.3 * rng.uniform();
      const double t2 = 0.2 + 0.3 * rng.uniform();

      const GeodesicPath path(h);
      const Projection at_t1 = path.position(t1);
      const Projection direct = path.position(t1 + t2);
      worst_ortho = std::max(
          worst_ortho, Projection::orthonormality_gap(direct.matrix()));

      const TangentDirection h_moved = path.transport(h, t1, at_t1);
      const Projection continued = geodesic_step(h_moved, t2);
      worst_angle = std::max(
          worst_angle, max_principal_angle(continued.matrix(), direct.matrix()));

      const TangentDirection other_moved = path.transport(other, t1, at_t1);
      worst_norm = std::max(worst_norm,
                            std::abs(other_moved.norm() - other.norm()) /
                                other.norm());
    }
    report("geodesic_orthonormality", worst_ortho, 1e-8);
    report("geodesic_composition", worst_angle, 1e-8);
    report("transport_isometry", worst_norm, 1e-8);
  }

  // The cost depends on the subspace only, not the basis chosen inside it.
  {
    double worst = 0.0;
    for (Metric metric : {Metric::Airm, Metric::Stein}) {
      const ObjectiveContext ctx = small_context(rng, metric, 6, 3);
      const Projection w = random_frame(rng, 6, 2);
      const Eigen::MatrixXd rot =
          Eigen::HouseholderQR<Eigen::MatrixXd>(rng.gaussian_matrix(2, 2))
              .householderQ();
      const double base = cost(ctx, w.matrix());
      worst = std::max(worst,
                       std::abs(cost(ctx, w.matrix() * rot) - base) /
                           std::abs(base));
    }
    report("cost_rotation_invariance", worst, 1e-10);
  }

  // Covariance as a centred product: O J (O J)^T equals the two-pass result.
  {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const ObservationMatrix obs =
          ObservationMatrix::make(rng.gaussian_matrix(4, 12));
      const Eigen::MatrixXd centred =
          obs.data() * centering_factor(obs.n_obs());
      worst = std::max(
          worst, max_rel_gap(centred * centred.transpose(),
                             rcm(obs).matrix()));
    }
    report("rcm_factorisation", worst, 1e-10);
  }

  // Accepted optimizer iterates never increase the cost.
  {
    const PlantedDataset planted =
        make_planted_dataset(8, 2, 2, 5, 0.3, seed ^ 0x9e3779b97f4a7c15ull);
    FitOptions opts;
    opts.metric = Metric::Stein;
    opts.m = 2;
    opts.cg.max_iters = 25;
    double worst_increase = 0.0;
    double previous = 0.0;
    bool first = true;
    fit(planted.data, opts, {}, [&](const TraceRecord& record) {
      if (!first) worst_increase = std::max(worst_increase, record.cost - previous);
      previous = record.cost;
      first = false;
    });
    report("optimizer_monotone_cost", worst_increase, 0.0);
  }

  return results;
}

}  // namespace spdml
