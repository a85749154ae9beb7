#pragma once

#include <stdexcept>
#include <string>

namespace hasse {

enum class ErrorKind {
  InvalidSpec,
  NotNested,
  NotComplementary,
  WellDefinednessViolation,
  InvariantViolation,
  InvalidDatum,
  InvalidLift,
  RetryExhausted,
  Precondition,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map them to exit codes and reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::NotNested: return "NotNested";
    case ErrorKind::NotComplementary: return "NotComplementary";
    case ErrorKind::WellDefinednessViolation: return "WellDefinednessViolation";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::InvalidDatum: return "InvalidDatum";
    case ErrorKind::InvalidLift: return "InvalidLift";
    case ErrorKind::RetryExhausted: return "RetryExhausted";
    case ErrorKind::Precondition: return "Precondition";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace hasse
