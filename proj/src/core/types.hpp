// Shared enums and the library exception type.
#pragma once

#include <stdexcept>
#include <string>

namespace spdml {

enum class ErrorCode {
  InvalidArg,
  NotSquare,
  NotSymmetric,
  NotPositiveDefinite,
  DimMismatch,
  BaseMismatch,
  RankDeficient,
  EmptyList,
  SingularProjectedMatrix,
  InvalidParams,
  FoldTooSmall,
  Io,
  Parse,
  NumericalFailure,
};

// Stable short name, e.g. "NotPositiveDefinite".
const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

enum class Metric { Airm, Stein };

const char* metric_name(Metric metric);
Metric metric_from_name(const std::string& name);  // throws Parse

}  // namespace spdml
