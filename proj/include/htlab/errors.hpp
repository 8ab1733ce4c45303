#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace htlab {

enum class ErrorKind {
  NotPrime,
  NotEisenstein,
  NotAUnit,
  PrecisionExhausted,
  HorizonTooSmall,
  AxiomViolation,
  BadIndex,
  CommutationFailure,
  BraidFailure,
  NilpotenceFailure,
  IntegralityFailure,
  ClosedFormMismatch,
  InvalidUnitCoefficient,
  ValidationFailure,
  InsufficientPrecision,
  KernelRankDeficit,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this one exception type; the
// kind carries the error identity and the message carries the witness.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace htlab
