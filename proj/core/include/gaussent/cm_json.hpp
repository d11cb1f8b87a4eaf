#pragma once

// On-disk covariance matrix format:
//
//   {"n_modes": N, "ordering": "xpxp", "matrix": [[...], ...]}
//
// "matrix" holds 2N rows of 2N numbers in mode-major quadrature order.

#include <stdexcept>
#include <string>
#include <string_view>

#include "gaussent/phasespace.hpp"

namespace gaussent {

/// Raised for text that is not a well-formed covariance matrix document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numbers are written in shortest round-trip form.
std::string cm_to_json(const CovarianceMatrix& cm, int indent = -1);

/// Throws FormatError for malformed documents; CovarianceMatrix construction
/// errors (NonFinite, DimensionMismatch) propagate unchanged.
CovarianceMatrix cm_from_json(std::string_view text);

CovarianceMatrix read_cm_file(const std::string& path);
void write_cm_file(const std::string& path, const CovarianceMatrix& cm);

}  // namespace gaussent
