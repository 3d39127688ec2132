#pragma once

#include <stdexcept>
#include <string>

namespace silmarils {

enum class ErrorCode {
  InvalidPrime,
  ModulusMismatch,
  ZeroInverse,
  LengthMismatch,
  NonCanonical,
  DegenerateWeights,
  MalformedSignature,
  DegenerateExtraction,
  MissingSetup,
  MissingNonce,
  PhaseViolation,
  ScheduleViolation,
  AuthenticationViolation,
  EmptyExperiment,
  UnknownStrategy,
  RoleMismatch,
  PrimeTooLarge,
  InvalidHex,
  IoError,
  Usage,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a code so callers (the CLI in
// particular) can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace silmarils
