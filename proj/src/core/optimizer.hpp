// Conjugate gradient on the manifold of orthonormal frames.
#pragma once

#include <functional>
#include <vector>

#include "core/grassmann.hpp"
#include "core/objective.hpp"
#include "core/projection.hpp"

namespace spdml {

enum class LineSearchKind { Golden, Backtracking };

enum class StopReason {
  GradientTolerance,
  CostTolerance,
  MaxIterations,
  LineSearchFailed,
};

const char* stop_reason_name(StopReason reason);
StopReason stop_reason_from_name(const std::string& name);  // throws Parse

struct CgConfig {
  int max_iters = 200;
  double grad_tol = 0.0;    // 0: scaled default 1e-6 * sample count
  double cost_tol = 1e-9;   // relative decrease; three consecutive hits stop
  double max_step = 1.0;    // upper bound on the geodesic parameter
  int restart_every = 0;    // 0: manifold dimension m * (n - m)
  LineSearchKind line_search = LineSearchKind::Golden;
};

struct TraceRecord {
  int iteration;     // 0 is the starting point
  double cost;       // accepted cost after the step
  double grad_norm;  // Riemannian gradient norm at the iterate
  double step;       // accepted geodesic parameter, 0 for none
};

using TraceFn = std::function<void(const TraceRecord&)>;

struct MinimizeResult {
  Projection w;
  StopReason reason;
  std::vector<TraceRecord> trace;
  int iterations;          // accepted steps
  double initial_cost;
  double final_cost;
  double final_grad_norm;
};

// Minimises the objective from w0. Costs are non-increasing across accepted
// iterates; a failed line search returns the best iterate found with the
// LineSearchFailed reason rather than throwing.
MinimizeResult minimize(const ObjectiveContext& ctx, const Projection& w0,
                        const CgConfig& cfg, const TraceFn& sink = {});

}  // namespace spdml
