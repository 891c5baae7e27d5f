#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idealpoly {

enum class ErrorCode {
  InvalidInput,
  InputNotFound,
  EulerViolation,
  NonManifoldEdge,
  NonManifoldVertex,
  Disconnected,
  DegenerateFace,
  InvalidVertex,
  DomainError,
  PoleAtMultipleOfPi,
  NumericalFailure,
  InfeasibleStart,
  LineSearchStall,
  DegenerateSample,
  DegenerateTriangle,
  LayoutInconsistent,
  FitDiverged,
};

// Stable upper-snake identifier used in CLI error output.
std::string_view errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace idealpoly
