#include "core/types.hpp"

namespace spdml {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArg: return "InvalidArg";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::SingularProjectedMatrix: return "SingularProjectedMatrix";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::FoldTooSmall: return "FoldTooSmall";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

const char* metric_name(Metric metric) {
  return metric == Metric::Airm ? "airm" : "stein";
}

Metric metric_from_name(const std::string& name) {
  if (name == "airm") return Metric::Airm;
  if (name == "stein") return Metric::Stein;
  throw Error(ErrorCode::Parse, "unknown metric '" + name + "' (expected airm or stein)");
}

}  // namespace spdml
