#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace utb {

enum class ErrorKind {
  OutOfChart,
  NonPositiveDefinite,
  InvariantViolation,
  DomainBoundary,
  IntegrationFailure,
  ZeroSpeed,
  PositivityViolation,
  ZeroDenominator,
  ConstraintViolation,
  CaseMismatch,
  NonConstantCurvature,
  VanishingCurvature,
  NonUnitField,
  NegativeRadicand,
  HypothesisNotMet,
  DomainViolation,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Error category used by the CLI to pick an exit code.
enum class ErrorClass { Config, Numerical, Io };

ErrorClass classify_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfChart: return "OutOfChart";
    case ErrorKind::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::DomainBoundary: return "DomainBoundary";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::ZeroSpeed: return "ZeroSpeed";
    case ErrorKind::PositivityViolation: return "PositivityViolation";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::CaseMismatch: return "CaseMismatch";
    case ErrorKind::NonConstantCurvature: return "NonConstantCurvature";
    case ErrorKind::VanishingCurvature: return "VanishingCurvature";
    case ErrorKind::NonUnitField: return "NonUnitField";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::HypothesisNotMet: return "HypothesisNotMet";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

inline ErrorClass classify_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::PositivityViolation:
    case ErrorKind::ZeroDenominator:
      return ErrorClass::Config;
    case ErrorKind::IoError:
      return ErrorClass::Io;
    default:
      return ErrorClass::Numerical;
  }
}

}  // namespace utb
