#pragma once

// Two-mode Gaussian states described by their local and global purities.
//
// Any two-mode covariance matrix is brought by local symplectics to the
// standard form alpha = diag(a, a), beta = diag(b, b), gamma = diag(c+, c-).
// Up to local unitaries the state is fixed by the four invariants
// (mu1, mu2, mu, Delta): the two marginal purities, the global purity and
// Delta = Det alpha + Det beta + 2 Det gamma.

#include "gaussent/phasespace.hpp"

namespace gaussent {

struct TwoModeStandardForm {
  double a = 1.0;
  double b = 1.0;
  double c_plus = 0.0;
  double c_minus = 0.0;

  /// a == b within 1e-9.
  bool symmetric() const noexcept;
  /// a^2 + b^2 + 2 c+ c-
  double delta() const noexcept { return a * a + b * b + 2.0 * c_plus * c_minus; }
  double determinant() const noexcept {
    return (a * b - c_plus * c_plus) * (a * b - c_minus * c_minus);
  }
};

struct TwoModeInvariants {
  double mu1 = 1.0;
  double mu2 = 1.0;
  double mu = 1.0;
  double delta = 2.0;
};

struct InvariantIntermediates {
  double eps_minus = 0.0;
  double eps_plus = 0.0;
};

enum class EntanglementClass { Separable, Coexistence, Entangled };

const char* to_string(EntanglementClass c) noexcept;

/// Symplectic eigenvalues of the partially transposed state.
struct PptPair {
  double nu_tilde_minus = 1.0;
  double nu_tilde_plus = 1.0;
  double delta_tilde = 2.0;
};

struct ExtremalEntanglement {
  double e_max = 0.0;   // GMEMS
  double e_min = 0.0;   // GLEMS
  double e_avg = 0.0;
  double rel_error = 0.0;
};

/// Purity thresholds separating the three classification bands at fixed
/// marginals, plus the upper edge of the physical region.
struct PurityThresholds {
  double lower;         // mu1 mu2 (product states)
  double separable;     // mu1 mu2 / (mu1 + mu2 - mu1 mu2)
  double coexistence;   // mu1 mu2 / sqrt(mu1^2 + mu2^2 - mu1^2 mu2^2)
  double upper;         // mu1 mu2 / (mu1 mu2 + |mu1 - mu2|)
};

PurityThresholds purity_thresholds(double mu1, double mu2);

/// Attainable Delta at fixed purities. The lower end is 2/mu + (mu1 - mu2)^2
/// / (mu1 mu2)^2. The upper end is min{1 + 1/mu^2, (1/mu1 + 1/mu2)^2 - 2/mu};
/// the second term only binds inside the separable band, where it keeps the
/// radical eps+ real.
struct DeltaRange {
  double lower;
  double upper;
};

DeltaRange delta_range(double mu1, double mu2, double mu);

TwoModeInvariants invariants_from_cm(const CovarianceMatrix& cm);

/// Throws ConstraintViolation naming the violated bound (global purity range
/// or Delta range).
void check_invariants(const TwoModeInvariants& inv);

/// Radicals eps-/+ entering the standard-form coefficients.
InvariantIntermediates intermediates(const TwoModeInvariants& inv);

/// a = 1/mu1, b = 1/mu2, c+- = sqrt(mu1 mu2)/4 (eps- +- eps+).
/// The sign of c- follows Det gamma = (Delta - a^2 - b^2)/2.
TwoModeStandardForm standard_form_from_invariants(const TwoModeInvariants& inv);

CovarianceMatrix cm_from_standard_form(const TwoModeStandardForm& sf);

TwoModeStandardForm standard_form_from_cm(const CovarianceMatrix& cm);

PptPair ppt_eigenvalues(const TwoModeInvariants& inv);

/// max{0, -log nu~-}
double log_negativity_two_mode(const TwoModeInvariants& inv);

/// Bands use closed upper ends: a point on a threshold belongs to the lower band.
EntanglementClass classify_by_purities(double mu1, double mu2, double mu);

/// Maximally entangled state at fixed purities (Delta at its lower bound).
TwoModeStandardForm gmems(double mu1, double mu2, double mu);
/// Least entangled state at fixed purities (Delta at its upper bound). Outside
/// the separable band this is a state of partial minimum uncertainty.
TwoModeStandardForm glems(double mu1, double mu2, double mu);

TwoModeInvariants gmems_invariants(double mu1, double mu2, double mu);
TwoModeInvariants glems_invariants(double mu1, double mu2, double mu);

/// Bounds on the log-negativity from the purities alone. rel_error is 1 when
/// only the upper bound is positive and 0 when both vanish.
ExtremalEntanglement extremal_entanglement(double mu1, double mu2, double mu);

/// f(x) = C+ log C+ - C- log C-, C+- = (1 +- x)^2 / (4x), for x in (0, 1].
double eof_function(double x);

/// Entanglement of formation of a symmetric two-mode state, f(nu~-).
/// Throws NotSymmetric when the marginal purities differ by more than 1e-6.
double eof_symmetric(const CovarianceMatrix& cm);
double eof_symmetric(const TwoModeInvariants& inv);

}  // namespace gaussent
