#include "core/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace spdml {

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::GradientTolerance: return "gradient_tolerance";
    case StopReason::CostTolerance: return "cost_tolerance";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::LineSearchFailed: return "line_search_failed";
  }
  return "unknown";
}

StopReason stop_reason_from_name(const std::string& name) {
  if (name == "gradient_tolerance") return StopReason::GradientTolerance;
  if (name == "cost_tolerance") return StopReason::CostTolerance;
  if (name == "max_iterations") return StopReason::MaxIterations;
  if (name == "line_search_failed") return StopReason::LineSearchFailed;
  throw Error(ErrorCode::Parse, "unknown stop reason '" + name + "'");
}

namespace {

struct SearchOutcome {
  bool ok = false;
  double t = 0.0;
  double cost = 0.0;
};

// Derivative-free golden section over [0, t_hi], keeping the best probe.
// Succeeds iff some probe strictly decreases the cost.
SearchOutcome golden_search(const std::function<double(double)>& phi,
                            double f0, double t_hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  constexpr int kRounds = 32;

  SearchOutcome best;
  best.cost = f0;
  auto probe = [&](double t) {
    const double f = phi(t);
    if (f < best.cost) {
      best.ok = true;
      best.t = t;
      best.cost = f;
    }
    return f;
  };

  double a = 0.0, b = t_hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = probe(x1);
  double f2 = probe(x2);
  for (int round = 0; round < kRounds; ++round) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = probe(x2);
    }
  }
  return best;
}

// Armijo backtracking from t_hi using the known slope at 0.
SearchOutcome backtracking_search(const std::function<double(double)>& phi,
                                  double f0, double slope0, double t_hi) {
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 60;

  SearchOutcome best;
  best.cost = f0;
  double t = t_hi;
  for (int k = 0; k < kMaxHalvings; ++k) {
    const double f = phi(t);
    if (f < best.cost) {
      best.t = t;
      best.cost = f;
      best.ok = true;
    }
    if (f <= f0 + kArmijo * t * slope0) return best;
    t *= 0.5;
  }
  return best;
}

}  // namespace

MinimizeResult minimize(const ObjectiveContext& ctx, const Projection& w0,
                        const CgConfig& cfg, const TraceFn& sink) {
  if (w0.ambient_dim() != ctx.ambient_dim())
    throw Error(ErrorCode::DimMismatch,
                "starting frame does not match the sample dimension");
  if (cfg.max_iters < 0 || cfg.grad_tol < 0.0 || cfg.cost_tol < 0.0 ||
      cfg.max_step <= 0.0 || cfg.restart_every < 0)
    throw Error(ErrorCode::InvalidParams, "optimizer settings out of range");

  const Eigen::Index n = w0.ambient_dim();
  const Eigen::Index m = w0.subspace_dim();
  const double grad_tol =
      cfg.grad_tol > 0.0
          ? cfg.grad_tol
          : 1e-6 * static_cast<double>(ctx.data().size());
  const int restart_every =
      cfg.restart_every > 0
          ? cfg.restart_every
          : std::max<int>(1, static_cast<int>(m * (n - m)));

  MinimizeResult result{w0, StopReason::MaxIterations, {}, 0, 0.0, 0.0, 0.0};
  auto record = [&](int iteration, double f, double gnorm, double step) {
    result.trace.push_back({iteration, f, gnorm, step});
    if (sink) sink(result.trace.back());
  };

  Projection w = w0;
  double f = cost(ctx, w.matrix());
  TangentDirection grad = project_to_tangent(w, cost_jacobian(ctx, w.matrix()));
  double grad_norm = grad.norm();
  TangentDirection h = project_to_tangent(w, -grad.dir());

  result.initial_cost = f;
  record(0, f, grad_norm, 0.0);

  int small_decreases = 0;
  double prev_step = 0.0;
  int iter = 0;
  while (true) {
    if (grad_norm <= grad_tol) {
      result.reason = StopReason::GradientTolerance;
      break;
    }
    if (iter >= cfg.max_iters) {
      result.reason = StopReason::MaxIterations;
      break;
    }
    iter++;

    const GeodesicPath path(h);
    const double rate = path.max_rotation_rate();
    if (!(rate > 0.0)) {
      // Degenerate direction with a nonzero gradient: nothing to search.
      result.reason = StopReason::LineSearchFailed;
      record(iter, f, grad_norm, 0.0);
      break;
    }
    // Never search past a half turn of the fastest principal angle; beyond
    // it the geodesic starts revisiting subspaces.
    double t_hi = std::min(cfg.max_step, std::numbers::pi / rate);
    if (prev_step > 0.0) t_hi = std::min(t_hi, 8.0 * prev_step);

    auto phi = [&](double t) { return cost(ctx, path.position_raw(t)); };
    const double slope0 = grad.dir().cwiseProduct(h.dir()).sum();
    const SearchOutcome outcome =
        cfg.line_search == LineSearchKind::Golden
            ? golden_search(phi, f, t_hi)
            : backtracking_search(phi, f, slope0, t_hi);
    if (!outcome.ok) {
      result.reason = StopReason::LineSearchFailed;
      record(iter, f, grad_norm, 0.0);
      break;
    }
    prev_step = outcome.t;

    const Projection w_next = path.position(outcome.t);
    const double f_next = outcome.cost;
    const TangentDirection grad_next =
        project_to_tangent(w_next, cost_jacobian(ctx, w_next.matrix()));
    const double grad_next_norm = grad_next.norm();

    // Polak-Ribiere with the previous gradient carried along the geodesic.
    double eta = 0.0;
    if (iter % restart_every != 0) {
      const TangentDirection grad_moved = path.transport(grad, outcome.t, w_next);
      const double denom = grad_norm * grad_norm;
      if (denom > 0.0)
        eta = grad_next.dir()
                  .cwiseProduct(grad_next.dir() - grad_moved.dir())
                  .sum() /
              denom;
      if (eta < 0.0) eta = 0.0;
    }
    Eigen::MatrixXd h_dir = -grad_next.dir();
    if (eta > 0.0) {
      const TangentDirection h_moved = path.transport(h, outcome.t, w_next);
      h_dir += eta * h_moved.dir();
      // Keep a descent direction; fall back to steepest descent otherwise.
      if (h_dir.cwiseProduct(grad_next.dir()).sum() >= 0.0)
        h_dir = -grad_next.dir();
    }
    h = project_to_tangent(w_next, h_dir);

    const double decrease = f - f_next;
    w = w_next;
    f = f_next;
    grad = grad_next;
    grad_norm = grad_next_norm;
    result.iterations = iter;
    record(iter, f, grad_norm, outcome.t);

    if (decrease <= cfg.cost_tol * std::max(1.0, std::abs(f))) {
      if (++small_decreases >= 3) {
        result.reason = StopReason::CostTolerance;
        break;
      }
    } else {
      small_decreases = 0;
    }
  }

  result.w = w;
  result.final_cost = f;
  result.final_grad_norm = grad_norm;
  return result;
}

}  // namespace spdml
