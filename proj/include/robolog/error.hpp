#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robolog {

enum class ErrorCode {
  OutOfBounds,
  OccupiedEndpoint,
  NoPath,
  StepCapExceeded,
  DeadlockDetected,
  InvalidArgument,
  NonFinite,
  EmptyTrajectory,
  RateInfeasible,
  IoFailure,
  MalformedHeader,
  MalformedLine,
  NonUniformTimestamps,
  EmptyInput,
  SingleClassInput,
  DivergenceDetected,
  DimensionMismatch,
  UntrainedModel,
  LengthMismatch,
  MalformedCurve,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::OccupiedEndpoint: return "OccupiedEndpoint";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::StepCapExceeded: return "StepCapExceeded";
    case ErrorCode::DeadlockDetected: return "DeadlockDetected";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::RateInfeasible: return "RateInfeasible";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::NonUniformTimestamps: return "NonUniformTimestamps";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SingleClassInput: return "SingleClassInput";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UntrainedModel: return "UntrainedModel";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MalformedCurve: return "MalformedCurve";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

// All library failures are reported through this one exception type; the
// code is what callers (and the tests) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace robolog
