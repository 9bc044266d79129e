#include "core/objective.hpp"

#include <cmath>
#include <string>

#include "core/parallel.hpp"

namespace spdml {

namespace {

// A projected matrix W^T X W becomes useless for log-based costs well before
// it is exactly singular.
constexpr double kMaxCondition = 1e12;

// Per-sample quantities reused across every edge touching the sample.
struct Slot {
  Eigen::MatrixXd xw;        // X W
  Eigen::MatrixXd s;         // W^T X W, symmetrised
  double logdet = 0.0;
  Eigen::MatrixXd inv;
  Eigen::MatrixXd sqrt;
  Eigen::MatrixXd inv_sqrt;
};

Slot build_slot(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w,
                Eigen::Index sample) {
  Slot slot;
  slot.xw = x * w;
  const Eigen::MatrixXd s_raw = w.transpose() * slot.xw;
  slot.s = 0.5 * (s_raw + s_raw.transpose());

  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  detail::sym_eig(slot.s, values, vectors);
  const double min_eig = values.minCoeff();
  const double max_eig = values.maxCoeff();
  if (!(min_eig > 0.0) || max_eig / min_eig > kMaxCondition) {
    const std::string where =
        sample >= 0 ? " for sample " + std::to_string(sample) : "";
    throw Error(ErrorCode::SingularProjectedMatrix,
                "projected matrix" + where +
                    " is numerically singular (condition above 1e12)");
  }
  slot.logdet = values.array().log().sum();
  slot.inv = vectors * values.array().inverse().matrix().asDiagonal() *
             vectors.transpose();
  slot.sqrt = vectors * values.array().sqrt().matrix().asDiagonal() *
              vectors.transpose();
  slot.inv_sqrt = vectors * values.array().rsqrt().matrix().asDiagonal() *
                  vectors.transpose();
  return slot;
}

double edge_cost(Metric metric, const Slot& a, const Slot& b) {
  if (metric == Metric::Stein)
    return detail::logdet_cholesky(0.5 * (a.s + b.s)) -
           0.5 * (a.logdet + b.logdet);

  const Eigen::MatrixXd whitened = b.inv_sqrt * a.s * b.inv_sqrt;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  detail::sym_eig(0.5 * (whitened + whitened.transpose()), values, vectors);
  if (values.minCoeff() <= 0.0)
    throw Error(ErrorCode::NumericalFailure,
                "whitened projected matrix lost positive definiteness");
  return values.array().log().square().sum();
}

Eigen::MatrixXd edge_jacobian(Metric metric, const Slot& a, const Slot& b) {
  if (metric == Metric::Stein) {
    const Eigen::MatrixXd mid = 0.5 * (a.s + b.s);
    Eigen::LLT<Eigen::MatrixXd> llt(mid);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorCode::NumericalFailure,
                  "midpoint of projected matrices is numerically indefinite");
    // d/dW [log det(W^T (X+Y)/2 W)] = (X+Y) W mid^{-1}.
    return llt.solve((a.xw + b.xw).transpose()).transpose() - a.xw * a.inv -
           b.xw * b.inv;
  }

  // log(S_a S_b^{-1}) through the symmetric form.
  const Eigen::MatrixXd whitened = b.inv_sqrt * a.s * b.inv_sqrt;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  detail::sym_eig(0.5 * (whitened + whitened.transpose()), values, vectors);
  if (values.minCoeff() <= 0.0)
    throw Error(ErrorCode::NumericalFailure,
                "whitened projected matrix lost positive definiteness");
  const Eigen::MatrixXd log_whitened =
      vectors * values.array().log().matrix().asDiagonal() *
      vectors.transpose();
  const Eigen::MatrixXd log_ratio = b.sqrt * log_whitened * b.inv_sqrt;
  return 4.0 * (a.xw * a.inv - b.xw * b.inv) * log_ratio;
}

void check_projection_shape(const Eigen::MatrixXd& w, Eigen::Index n) {
  if (w.rows() != n)
    throw Error(ErrorCode::DimMismatch,
                "projection has " + std::to_string(w.rows()) +
                    " rows, samples have dimension " + std::to_string(n));
  if (w.cols() < 1 || w.cols() > w.rows())
    throw Error(ErrorCode::InvalidParams,
                "projection must have between 1 and n columns");
  if (!w.allFinite())
    throw Error(ErrorCode::InvalidParams,
                "projection contains non-finite entries");
}

// Slots for every sample touched by an edge; untouched samples stay empty.
std::vector<Slot> build_slots(const ObjectiveContext& ctx,
                              const Eigen::MatrixXd& w) {
  const auto& edges = ctx.edges();
  std::vector<char> active(ctx.data().size(), 0);
  for (const auto& edge : edges) active[edge.i] = active[edge.j] = 1;
  std::vector<Eigen::Index> indices;
  for (Eigen::Index i = 0; i < ctx.data().size(); ++i)
    if (active[i]) indices.push_back(i);

  std::vector<Slot> slots(ctx.data().size());
  parallel_chunks(indices.size(), 8,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t k = begin; k < end; ++k) {
                      const Eigen::Index i = indices[k];
                      slots[i] = build_slot(ctx.data().matrix(i).matrix(), w, i);
                    }
                  });
  return slots;
}

}  // namespace

SpdMatrix map_spd(const SpdMatrix& x, const Projection& w) {
  if (w.ambient_dim() != x.dim())
    throw Error(ErrorCode::DimMismatch,
                "projection rows must match the matrix dimension");
  const Eigen::MatrixXd mapped =
      w.matrix().transpose() * x.matrix() * w.matrix();
  try {
    return SpdMatrix::make(mapped);
  } catch (const Error& error) {
    if (error.code() == ErrorCode::NotPositiveDefinite)
      throw Error(ErrorCode::SingularProjectedMatrix,
                  "projected matrix is numerically singular");
    throw;
  }
}

ObjectiveContext ObjectiveContext::make(LabeledSpdDataset data,
                                        AffinityMatrix a, Metric metric) {
  if (a.size() != data.size())
    throw Error(ErrorCode::DimMismatch,
                "affinity size " + std::to_string(a.size()) +
                    " does not match sample count " +
                    std::to_string(data.size()));
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = i + 1; j < a.size(); ++j)
      if (a.entries()(i, j) != 0.0)
        edges.push_back({i, j, a.entries()(i, j)});
  return ObjectiveContext(std::move(data), std::move(a), metric,
                          std::move(edges));
}

double cost(const ObjectiveContext& ctx, const Eigen::MatrixXd& w) {
  check_projection_shape(w, ctx.ambient_dim());
  if (ctx.edges().empty()) return 0.0;
  const std::vector<Slot> slots = build_slots(ctx, w);
  const auto& edges = ctx.edges();
  const double half = parallel_reduce<double>(
      edges.size(), 64, 0.0,
      [&](std::size_t k, double& acc) {
        const auto& edge = edges[k];
        acc += edge.weight *
               edge_cost(ctx.metric(), slots[edge.i], slots[edge.j]);
      },
      [](double& total, const double& partial) { total += partial; });
  return 2.0 * half;
}

Eigen::MatrixXd cost_jacobian(const ObjectiveContext& ctx,
                              const Eigen::MatrixXd& w) {
  check_projection_shape(w, ctx.ambient_dim());
  if (ctx.edges().empty())
    return Eigen::MatrixXd::Zero(w.rows(), w.cols());
  const std::vector<Slot> slots = build_slots(ctx, w);
  const auto& edges = ctx.edges();
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(w.rows(), w.cols());
  const Eigen::MatrixXd half = parallel_reduce<Eigen::MatrixXd>(
      edges.size(), 64, zero,
      [&](std::size_t k, Eigen::MatrixXd& acc) {
        const auto& edge = edges[k];
        acc += edge.weight *
               edge_jacobian(ctx.metric(), slots[edge.i], slots[edge.j]);
      },
      [](Eigen::MatrixXd& total, const Eigen::MatrixXd& partial) {
        total += partial;
      });
  return 2.0 * half;
}

double pair_cost(Metric metric, const SpdMatrix& xi, const SpdMatrix& xj,
                 double weight, const Eigen::MatrixXd& w) {
  if (xi.dim() != xj.dim())
    throw Error(ErrorCode::DimMismatch, "pair must share one dimension");
  check_projection_shape(w, xi.dim());
  if (weight == 0.0) return 0.0;
  return weight * edge_cost(metric, build_slot(xi.matrix(), w, -1),
                            build_slot(xj.matrix(), w, -1));
}

Eigen::MatrixXd pair_jacobian(Metric metric, const SpdMatrix& xi,
                              const SpdMatrix& xj, const Eigen::MatrixXd& w) {
  if (xi.dim() != xj.dim())
    throw Error(ErrorCode::DimMismatch, "pair must share one dimension");
  check_projection_shape(w, xi.dim());
  return edge_jacobian(metric, build_slot(xi.matrix(), w, -1),
                       build_slot(xj.matrix(), w, -1));
}

Eigen::MatrixXd logdet_grad(const SpdMatrix& x, const Eigen::MatrixXd& w) {
  check_projection_shape(w, x.dim());
  const Slot slot = build_slot(x.matrix(), w, -1);
  return 2.0 * slot.xw * slot.inv;
}

}  // namespace spdml
