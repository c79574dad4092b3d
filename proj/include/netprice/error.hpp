#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netprice {

enum class ErrorKind {
  SingularMatrix,
  InvalidParameter,
  AssumptionViolated,
  NoRoot,
  NonMonotonePath,
  InfeasibleThresholds,
  ShapeMismatch,
  TooLarge,
  ConditionViolated,
  SpectralRadiusTooLarge,
  InvalidDistribution,
};

std::string_view to_string(ErrorKind kind);

/** Single exception type for every library failure; `kind()` identifies the category. */
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace netprice
