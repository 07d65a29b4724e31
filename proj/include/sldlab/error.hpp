#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sldlab {

enum class ErrorCode {
  InvalidArgument,
  DegreeTooLarge,
  ZeroInput,
  ZeroPolynomial,
  ZeroArgument,
  NoConvergence,
  AsymmetricSpectrum,
  PoleEvaluation,
  ConditionViolated,
  PeriodMismatch,
  DegenerateSampling,
  NotEquivalent,
  InvalidSpec,
  ZeroSignal,
  CombinatorialBlowup,
  NotAnAutocorrelation,
  NegativeIntensity,
  OutOfRange,
  DuplicateSignals,
  InvalidNoiseSpec,
  UnsupportedOrder,
  NonInvertibleOnRange,
  ParseError,
  SchemaMismatch,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AsymmetricSpectrum: return "AsymmetricSpectrum";
    case ErrorCode::PoleEvaluation: return "PoleEvaluation";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::PeriodMismatch: return "PeriodMismatch";
    case ErrorCode::DegenerateSampling: return "DegenerateSampling";
    case ErrorCode::NotEquivalent: return "NotEquivalent";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ZeroSignal: return "ZeroSignal";
    case ErrorCode::CombinatorialBlowup: return "CombinatorialBlowup";
    case ErrorCode::NotAnAutocorrelation: return "NotAnAutocorrelation";
    case ErrorCode::NegativeIntensity: return "NegativeIntensity";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DuplicateSignals: return "DuplicateSignals";
    case ErrorCode::InvalidNoiseSpec: return "InvalidNoiseSpec";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::NonInvertibleOnRange: return "NonInvertibleOnRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sldlab
