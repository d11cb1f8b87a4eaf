#include "gaussent/errors.hpp"

namespace gaussent {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Unphysical: return "Unphysical";
    case ErrorKind::DegenerateNumerics: return "DegenerateNumerics";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::EmptyKeepSet: return "EmptyKeepSet";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::UnphysicalPurities: return "UnphysicalPurities";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotBisymmetric: return "NotBisymmetric";
    case ErrorKind::NotPure: return "NotPure";
    case ErrorKind::OptimizerFailure: return "OptimizerFailure";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace gaussent
