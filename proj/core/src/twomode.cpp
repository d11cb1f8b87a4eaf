#include "gaussent/twomode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaussent {

namespace {

constexpr double kBoundSlack = 1e-8;
constexpr double kRadicandClamp = 1e-10;

// Clamps roundoff-negative radicands; the tolerance scales with the size of
// the terms whose difference produced the radicand.
double clamped_sqrt(double radicand, double scale, const char* what) {
  if (radicand >= 0.0) return std::sqrt(radicand);
  if (radicand >= -kRadicandClamp * std::max(1.0, scale)) return 0.0;
  std::ostringstream os;
  os << what << ": negative radicand " << radicand;
  throw Error(ErrorKind::NegativeRadicand, os.str());
}

bool leq(double lhs, double rhs) { return lhs <= rhs + kBoundSlack * std::max(1.0, std::abs(rhs)); }

void check_purity_range(double mu1, double mu2, double mu, ErrorKind kind) {
  for (double m : {mu1, mu2, mu}) {
    if (!std::isfinite(m) || m <= 0.0 || m > 1.0 + kBoundSlack) {
      std::ostringstream os;
      os << "purities must lie in (0, 1], got (" << mu1 << ", " << mu2 << ", " << mu << ")";
      throw Error(kind, os.str());
    }
  }
  const PurityThresholds t = purity_thresholds(mu1, mu2);
  if (!leq(t.lower, mu) || !leq(mu, t.upper)) {
    std::ostringstream os;
    os << "global purity " << mu << " outside the physical range [" << t.lower << ", " << t.upper
       << "] fixed by the marginals mu1 mu2 <= mu <= mu1 mu2 / (mu1 mu2 + |mu1 - mu2|)";
    throw Error(kind, os.str());
  }
}

double xlogx(double z) { return z > 0.0 ? z * std::log(z) : 0.0; }

}  // namespace

bool TwoModeStandardForm::symmetric() const noexcept { return std::abs(a - b) <= 1e-9; }

const char* to_string(EntanglementClass c) noexcept {
  switch (c) {
    case EntanglementClass::Separable: return "Separable";
    case EntanglementClass::Coexistence: return "Coexistence";
    case EntanglementClass::Entangled: return "Entangled";
  }
  return "Unknown";
}

PurityThresholds purity_thresholds(double mu1, double mu2) {
  const double p = mu1 * mu2;
  PurityThresholds t{};
  t.lower = p;
  t.separable = p / (mu1 + mu2 - p);
  t.coexistence = p / std::sqrt(mu1 * mu1 + mu2 * mu2 - p * p);
  t.upper = p / (p + std::abs(mu1 - mu2));
  return t;
}

TwoModeInvariants invariants_from_cm(const CovarianceMatrix& cm) {
  if (cm.n_modes() != 2) throw Error(ErrorKind::DimensionMismatch, "expected a two-mode covariance matrix");
  require_physical(cm);
  TwoModeInvariants inv;
  inv.mu1 = 1.0 / std::sqrt(cm.block(0, 0).determinant());
  inv.mu2 = 1.0 / std::sqrt(cm.block(1, 1).determinant());
  inv.mu = 1.0 / std::sqrt(cm.matrix().determinant());
  inv.delta = cm.block(0, 0).determinant() + cm.block(1, 1).determinant() +
              2.0 * cm.block(0, 1).determinant();
  return inv;
}

DeltaRange delta_range(double mu1, double mu2, double mu) {
  const double m12 = mu1 * mu2;
  const double sum = 1.0 / mu1 + 1.0 / mu2;
  return {2.0 / mu + (mu1 - mu2) * (mu1 - mu2) / (m12 * m12),
          std::min(1.0 + 1.0 / (mu * mu), sum * sum - 2.0 / mu)};
}

void check_invariants(const TwoModeInvariants& inv) {
  check_purity_range(inv.mu1, inv.mu2, inv.mu, ErrorKind::ConstraintViolation);
  const DeltaRange range = delta_range(inv.mu1, inv.mu2, inv.mu);
  if (!std::isfinite(inv.delta) || !leq(range.lower, inv.delta) || !leq(inv.delta, range.upper)) {
    std::ostringstream os;
    os << "Delta = " << inv.delta << " outside [" << range.lower << ", " << range.upper
       << "] required by 2/mu + (mu1 - mu2)^2/(mu1 mu2)^2 <= Delta <= "
          "min{1 + 1/mu^2, (1/mu1 + 1/mu2)^2 - 2/mu}";
    throw Error(ErrorKind::ConstraintViolation, os.str());
  }
}

InvariantIntermediates intermediates(const TwoModeInvariants& inv) {
  check_invariants(inv);
  const double m12sq = inv.mu1 * inv.mu1 * inv.mu2 * inv.mu2;
  const double dm = (inv.mu1 - inv.mu2) * (inv.mu1 - inv.mu2) / m12sq;
  const double dp = (inv.mu1 + inv.mu2) * (inv.mu1 + inv.mu2) / m12sq;
  const double four_over_mu2 = 4.0 / (inv.mu * inv.mu);
  const double tm = inv.delta - dm;
  const double tp = inv.delta - dp;
  InvariantIntermediates out;
  out.eps_minus = clamped_sqrt(tm * tm - four_over_mu2, std::max(tm * tm, four_over_mu2), "eps-");
  out.eps_plus = clamped_sqrt(tp * tp - four_over_mu2, std::max(tp * tp, four_over_mu2), "eps+");
  return out;
}

TwoModeStandardForm standard_form_from_invariants(const TwoModeInvariants& inv) {
  const InvariantIntermediates eps = intermediates(inv);
  const double k = std::sqrt(inv.mu1 * inv.mu2) / 4.0;
  TwoModeStandardForm sf;
  sf.a = 1.0 / inv.mu1;
  sf.b = 1.0 / inv.mu2;
  sf.c_plus = k * (eps.eps_minus + eps.eps_plus);
  sf.c_minus = k * (eps.eps_minus - eps.eps_plus);
  return sf;
}

CovarianceMatrix cm_from_standard_form(const TwoModeStandardForm& sf) {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = sf.a;
  m(2, 2) = m(3, 3) = sf.b;
  m(0, 2) = m(2, 0) = sf.c_plus;
  m(1, 3) = m(3, 1) = sf.c_minus;
  CovarianceMatrix cm(std::move(m));
  require_physical(cm);
  return cm;
}

TwoModeStandardForm standard_form_from_cm(const CovarianceMatrix& cm) {
  const TwoModeInvariants inv = invariants_from_cm(cm);
  TwoModeStandardForm sf = standard_form_from_invariants(inv);
  // Det gamma carries the sign of c+ c-; it is encoded in Delta already, but
  // the radicals can lose it when |c-| is at roundoff level.
  const double det_gamma = cm.block(0, 1).determinant();
  if (det_gamma < 0.0 && sf.c_minus > 0.0) sf.c_minus = -sf.c_minus;
  if (det_gamma > 0.0 && sf.c_minus < 0.0) sf.c_minus = -sf.c_minus;
  return sf;
}

PptPair ppt_eigenvalues(const TwoModeInvariants& inv) {
  try {
    check_invariants(inv);
  } catch (const Error& e) {
    // Out-of-range invariants make the radicals of the spectrum meaningless.
    throw Error(ErrorKind::NegativeRadicand, std::string("inconsistent invariants: ") + e.what());
  }
  PptPair out;
  out.delta_tilde = -inv.delta + 2.0 / (inv.mu1 * inv.mu1) + 2.0 / (inv.mu2 * inv.mu2);
  const double four_over_mu2 = 4.0 / (inv.mu * inv.mu);
  const double dt2 = out.delta_tilde * out.delta_tilde;
  const double root = clamped_sqrt(dt2 - four_over_mu2, std::max(dt2, four_over_mu2), "nu~");
  // nu~- nu~+ = 1/mu; take the small root from the product to avoid cancellation.
  const double plus_sq = 0.5 * (out.delta_tilde + root);
  if (!(plus_sq > 0.0)) {
    throw Error(ErrorKind::NegativeRadicand, "partially transposed spectrum is not positive");
  }
  out.nu_tilde_plus = std::sqrt(plus_sq);
  out.nu_tilde_minus = 1.0 / (inv.mu * out.nu_tilde_plus);
  return out;
}

double log_negativity_two_mode(const TwoModeInvariants& inv) {
  return std::max(0.0, -std::log(ppt_eigenvalues(inv).nu_tilde_minus));
}

EntanglementClass classify_by_purities(double mu1, double mu2, double mu) {
  check_purity_range(mu1, mu2, mu, ErrorKind::UnphysicalPurities);
  const PurityThresholds t = purity_thresholds(mu1, mu2);
  if (mu <= t.separable) return EntanglementClass::Separable;
  if (mu <= t.coexistence) return EntanglementClass::Coexistence;
  return EntanglementClass::Entangled;
}

TwoModeInvariants gmems_invariants(double mu1, double mu2, double mu) {
  check_purity_range(mu1, mu2, mu, ErrorKind::ConstraintViolation);
  return TwoModeInvariants{mu1, mu2, mu, delta_range(mu1, mu2, mu).lower};
}

TwoModeInvariants glems_invariants(double mu1, double mu2, double mu) {
  check_purity_range(mu1, mu2, mu, ErrorKind::ConstraintViolation);
  return TwoModeInvariants{mu1, mu2, mu, delta_range(mu1, mu2, mu).upper};
}

TwoModeStandardForm gmems(double mu1, double mu2, double mu) {
  return standard_form_from_invariants(gmems_invariants(mu1, mu2, mu));
}

TwoModeStandardForm glems(double mu1, double mu2, double mu) {
  return standard_form_from_invariants(glems_invariants(mu1, mu2, mu));
}

ExtremalEntanglement extremal_entanglement(double mu1, double mu2, double mu) {
  check_purity_range(mu1, mu2, mu, ErrorKind::UnphysicalPurities);
  ExtremalEntanglement out;
  out.e_max = log_negativity_two_mode(gmems_invariants(mu1, mu2, mu));
  out.e_min = log_negativity_two_mode(glems_invariants(mu1, mu2, mu));
  out.e_avg = 0.5 * (out.e_max + out.e_min);
  const double sum = out.e_max + out.e_min;
  if (sum <= 0.0) {
    out.rel_error = 0.0;
  } else if (out.e_min <= 0.0) {
    out.rel_error = 1.0;
  } else {
    out.rel_error = (out.e_max - out.e_min) / sum;
  }
  return out;
}

double eof_function(double x) {
  if (!(x > 0.0) || x > 1.0 + 1e-12) {
    throw Error(ErrorKind::DomainError, "f(x) is defined for x in (0, 1]");
  }
  x = std::min(x, 1.0);
  const double c_plus = (1.0 + x) * (1.0 + x) / (4.0 * x);
  const double c_minus = (1.0 - x) * (1.0 - x) / (4.0 * x);
  return xlogx(c_plus) - xlogx(c_minus);
}

double eof_symmetric(const TwoModeInvariants& inv) {
  if (std::abs(inv.mu1 - inv.mu2) > 1e-6 * std::max(inv.mu1, inv.mu2)) {
    throw Error(ErrorKind::NotSymmetric,
                "entanglement of formation is only available for symmetric states");
  }
  const double nu = ppt_eigenvalues(inv).nu_tilde_minus;
  return nu < 1.0 ? eof_function(nu) : 0.0;
}

double eof_symmetric(const CovarianceMatrix& cm) { return eof_symmetric(invariants_from_cm(cm)); }

}  // namespace gaussent
