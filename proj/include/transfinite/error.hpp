#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace transfinite {

enum class ErrorKind {
  DepthExceeded,
  NotLimit,
  Parse,
  Undecidable,
  ClassViolation,
  NotOracleSpace,
  PartitionViolation,
  CertificateViolation,
  VerificationError,
  InclusionViolation,
  ResidualViolation,
  WitnessMismatch,
  PrecisionUnreachable,
  ExitNotFound,
  BudgetExceeded,
  InvalidArgument,
  Unsupported,
};

std::string_view to_string(ErrorKind kind);

/// Every failure in the library surfaces as this exception; `kind()` lets the
/// CLI map it to an exit status and tests match on the contract violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The text without the kind prefix, for rethrowing with added context.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace transfinite
