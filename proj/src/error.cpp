#include "idealpoly/error.hpp"

namespace idealpoly {

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::InputNotFound: return "INPUT_NOT_FOUND";
    case ErrorCode::EulerViolation: return "EULER_VIOLATION";
    case ErrorCode::NonManifoldEdge: return "NON_MANIFOLD_EDGE";
    case ErrorCode::NonManifoldVertex: return "NON_MANIFOLD_VERTEX";
    case ErrorCode::Disconnected: return "DISCONNECTED";
    case ErrorCode::DegenerateFace: return "DEGENERATE_FACE";
    case ErrorCode::InvalidVertex: return "INVALID_VERTEX";
    case ErrorCode::DomainError: return "DOMAIN_ERROR";
    case ErrorCode::PoleAtMultipleOfPi: return "POLE_AT_MULTIPLE_OF_PI";
    case ErrorCode::NumericalFailure: return "NUMERICAL_FAILURE";
    case ErrorCode::InfeasibleStart: return "INFEASIBLE_START";
    case ErrorCode::LineSearchStall: return "LINE_SEARCH_STALL";
    case ErrorCode::DegenerateSample: return "DEGENERATE_SAMPLE";
    case ErrorCode::DegenerateTriangle: return "DEGENERATE_TRIANGLE";
    case ErrorCode::LayoutInconsistent: return "LAYOUT_INCONSISTENT";
    case ErrorCode::FitDiverged: return "FIT_DIVERGED";
  }
  return "UNKNOWN";
}

}  // namespace idealpoly
