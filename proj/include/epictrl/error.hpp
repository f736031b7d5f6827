#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace epictrl {

enum class ErrorCode {
  // parameter / input validation
  NonFinite,
  NegativeRate,
  ZeroSigma,
  NonPositivePopulation,
  MuZero,
  AlphaTooSmall,
  DegenerateRates,
  NonPositiveGain,
  GainTooNegative,
  InvalidConfig,
  NegativeTarget,
  ZeroTarget,
  WindowExceedsHorizon,
  NoEndemicPoint,
  NotAnEquilibrium,
  PNotHurwitz,
  DegenerateLeadingCoefficient,
  NoSignChange,
  ParseError,
  ValidationError,
  UnknownBuiltin,
  EmptySweep,
  // runtime invariant violations
  ConservationViolated,
  PositivityViolated,
  NonFiniteState,
  // filesystem
  Io,
};

enum class ErrorCategory { Validation, Invariant, Io };

inline constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::ZeroSigma: return "ZeroSigma";
    case ErrorCode::NonPositivePopulation: return "NonPositivePopulation";
    case ErrorCode::MuZero: return "MuZero";
    case ErrorCode::AlphaTooSmall: return "AlphaTooSmall";
    case ErrorCode::DegenerateRates: return "DegenerateRates";
    case ErrorCode::NonPositiveGain: return "NonPositiveGain";
    case ErrorCode::GainTooNegative: return "GainTooNegative";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NegativeTarget: return "NegativeTarget";
    case ErrorCode::ZeroTarget: return "ZeroTarget";
    case ErrorCode::WindowExceedsHorizon: return "WindowExceedsHorizon";
    case ErrorCode::NoEndemicPoint: return "NoEndemicPoint";
    case ErrorCode::NotAnEquilibrium: return "NotAnEquilibrium";
    case ErrorCode::PNotHurwitz: return "PNotHurwitz";
    case ErrorCode::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorCode::EmptySweep: return "EmptySweep";
    case ErrorCode::ConservationViolated: return "ConservationViolated";
    case ErrorCode::PositivityViolated: return "PositivityViolated";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

inline constexpr ErrorCategory category(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConservationViolated:
    case ErrorCode::PositivityViolated:
    case ErrorCode::NonFiniteState:
      return ErrorCategory::Invariant;
    case ErrorCode::Io:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Validation;
  }
}

/// Error raised by every epictrl operation. The message names the module,
/// the operation and the offending value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string_view module, std::string_view op, const std::string& detail)
      : std::runtime_error(format(code, module, op, detail)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return epictrl::category(code_); }

 private:
  static std::string format(ErrorCode code, std::string_view module, std::string_view op,
                            const std::string& detail) {
    std::ostringstream os;
    os << module << "::" << op << ": " << to_string(code) << ": " << detail;
    return os.str();
  }

  ErrorCode code_;
};

namespace detail {

template <class... Args>
std::string cat(const Args&... args) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << args);
  return os.str();
}

}  // namespace detail
}  // namespace epictrl
