#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaussent {

enum class ErrorKind {
  NonFinite,
  DimensionMismatch,
  Unphysical,
  DegenerateNumerics,
  NotPositiveDefinite,
  EmptyKeepSet,
  IndexOutOfRange,
  ConstraintViolation,
  NegativeRadicand,
  UnphysicalPurities,
  NotSymmetric,
  NotBisymmetric,
  NotPure,
  OptimizerFailure,
  DomainError,
  InvalidArgument,
};

/// Stable identifier used on the CLI error stream, e.g. "NotBisymmetric".
std::string_view error_name(ErrorKind kind) noexcept;

/// Every domain failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace gaussent
