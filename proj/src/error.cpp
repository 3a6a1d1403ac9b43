#include "transfinite/error.hpp"

namespace transfinite {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::NotLimit: return "NotLimit";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Undecidable: return "Undecidable";
    case ErrorKind::ClassViolation: return "ClassViolation";
    case ErrorKind::NotOracleSpace: return "NotOracleSpace";
    case ErrorKind::PartitionViolation: return "PartitionViolation";
    case ErrorKind::CertificateViolation: return "CertificateViolation";
    case ErrorKind::VerificationError: return "VerificationError";
    case ErrorKind::InclusionViolation: return "InclusionViolation";
    case ErrorKind::ResidualViolation: return "ResidualViolation";
    case ErrorKind::WitnessMismatch: return "WitnessMismatch";
    case ErrorKind::PrecisionUnreachable: return "PrecisionUnreachable";
    case ErrorKind::ExitNotFound: return "ExitNotFound";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Error";
}

}  // namespace transfinite
