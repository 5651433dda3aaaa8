#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gapkgf {

enum class ErrorCode {
  InvalidArgument,
  LightLineSingularity,
  SingularTransform,
  SingularMatrix,
  ZeroFrequency,
  OutOfTableRange,
  ParseError,
  PassivityViolation,
  NonMonotonic,
  NegativeOccupation,
  ResonantFactor,
  CavityResonance,
  DomainError,
  QuadratureNonConvergence,
  ConfigError,
  ValidationError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LightLineSingularity: return "LightLineSingularity";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ZeroFrequency: return "ZeroFrequency";
    case ErrorCode::OutOfTableRange: return "OutOfTableRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::PassivityViolation: return "PassivityViolation";
    case ErrorCode::NonMonotonic: return "NonMonotonic";
    case ErrorCode::NegativeOccupation: return "NegativeOccupation";
    case ErrorCode::ResonantFactor: return "ResonantFactor";
    case ErrorCode::CavityResonance: return "CavityResonance";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above so that
// callers (the map builder, the CLI) can aggregate or classify it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gapkgf
