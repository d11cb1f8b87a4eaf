#pragma once

// Coherent-state teleportation networks over fully symmetric resources.
//
// N parties share a state made by mixing one p-squeezed and N-1 x-squeezed
// modes on an N-splitter. N-2 of them measure p and announce the result; the
// remaining pair runs unit-gain two-party teleportation.

#include <cstddef>

#include "gaussent/phasespace.hpp"

namespace gaussent {

/// Fidelity reachable without shared entanglement.
inline constexpr double kClassicalFidelity = 0.5;

struct TeleportResourceSpec {
  std::size_t n_parties = 2;
  double r1 = 0.0;     // p-squeezed input
  double r2 = 0.0;     // each x-squeezed input
  double noise = 1.0;  // thermal factor on every input

  double r_bar() const noexcept { return 0.5 * (r1 + r2); }
  /// Throws InvalidArgument on n < 2, negative squeezing or noise < 1.
  void validate() const;
};

CovarianceMatrix build_resource(const TeleportResourceSpec& spec);

enum class Quadrature { X, P };

/// Covariance matrix of the other modes after homodyne detection of `mode`.
/// Independent of the measurement outcome.
CovarianceMatrix homodyne_condition(const CovarianceMatrix& cm, Mode mode, Quadrature q);

/// Unit-gain output for a coherent input, sender = mode 0, receiver = mode 1:
///   I + Z alpha Z + beta - Z gamma - gamma^T Z,  Z = diag(1, -1).
CovarianceMatrix bk_output_cm(const CovarianceMatrix& resource);

/// 2 / sqrt(Det(I + sigma_out)).
double fidelity_coherent(const CovarianceMatrix& sigma_out);

/// Conditions every mode other than sender and receiver on a p measurement,
/// then teleports from sender to receiver.
double network_fidelity(const CovarianceMatrix& resource, Mode sender, Mode receiver);

struct FidelityResult {
  double fidelity = kClassicalFidelity;
  double e_t = 0.0;
  /// r1 - r2 at the optimum.
  double optimal_bias = 0.0;
  /// False when the maximum sits on the edge of the scanned interval; the
  /// best scanned point is reported then.
  bool converged = true;
};

/// Maximizes network_fidelity over the bias d = r1 - r2 at fixed
/// r_bar = (r1 + r2)/2, keeping both squeezings nonnegative.
FidelityResult optimal_fidelity(std::size_t n_parties, double r_bar, double noise = 1.0);

/// max{0, 2 F - 1}
double entanglement_of_teleportation(double f_opt);

/// f((1 - E_T)/(1 + E_T)); throws DomainError for E_T outside [0, 1).
double localizable_eof_from_et(double e_t);

/// Largest E_T accepted by tripartite_contangle_from_et.
inline constexpr double kMaxTripartiteEt = 1.0 - 1e-9;

/// Residual contangle of the optimal three-party resource as a function of
/// its entanglement of teleportation.
double tripartite_contangle_from_et(double e_t);

}  // namespace gaussent
