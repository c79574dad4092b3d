#include "netprice/error.hpp"

namespace netprice {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::NonMonotonePath: return "NonMonotonePath";
    case ErrorKind::InfeasibleThresholds: return "InfeasibleThresholds";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ConditionViolated: return "ConditionViolated";
    case ErrorKind::SpectralRadiusTooLarge: return "SpectralRadiusTooLarge";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace netprice
