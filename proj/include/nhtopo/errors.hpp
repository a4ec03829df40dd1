#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nhtopo {

enum class ErrorCode {
  NonPositiveGammaEff,
  InvalidParameters,
  SizeTooSmall,
  OriginOnCurve,
  NonIntegerWinding,
  DegenerateSpectrum,
  NumericalFailure,
  AmbiguousSeparation,
  NotAtExceptionalPoint,
  EtaUnit,
  SingularAtProbe,
  NotApplicable,
  SchemaMismatch,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; the code identifies
// the condition, the message carries the offending values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveGammaEff: return "NonPositiveGammaEff";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::SizeTooSmall: return "SizeTooSmall";
    case ErrorCode::OriginOnCurve: return "OriginOnCurve";
    case ErrorCode::NonIntegerWinding: return "NonIntegerWinding";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::AmbiguousSeparation: return "AmbiguousSeparation";
    case ErrorCode::NotAtExceptionalPoint: return "NotAtExceptionalPoint";
    case ErrorCode::EtaUnit: return "EtaUnit";
    case ErrorCode::SingularAtProbe: return "SingularAtProbe";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace nhtopo
