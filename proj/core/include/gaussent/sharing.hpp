#pragma once

// Distributed entanglement: the contangle (squared logarithmic negativity of
// pure states, extended to mixed states by a roof over pure Gaussian
// decompositions) and its monogamy.

#include <cstdint>
#include <vector>

#include "gaussent/phasespace.hpp"

namespace gaussent {

enum class ContangleMethod { AnalyticPure, GaussianRoofNumeric };

const char* to_string(ContangleMethod m) noexcept;

struct ContangleValue {
  double value = 0.0;
  ContangleMethod method = ContangleMethod::AnalyticPure;
  /// False when optimizer restarts disagreed by more than 1e-4; value is
  /// then the best feasible point found.
  bool converged = true;
};

/// Controls the numerical roof. The seed fixes the restart points.
struct RoofOptions {
  std::uint64_t seed = 20070101;
  int restarts = 8;
};

/// Symplectic eigenvalues within this distance of 1 count as pure.
inline constexpr double kPurityTol = 1e-7;

bool is_pure(const CovarianceMatrix& cm);

/// log^2(b - sqrt(b^2 - 1)) for a pure state whose reduced mode has
/// local mixedness b = 1/mu.
double contangle_from_mixedness(double b);

/// Contangle of mode i against the rest of a pure state.
/// Throws NotPure when some symplectic eigenvalue differs from 1.
ContangleValue contangle_pure_1_vs_rest(const CovarianceMatrix& cm, Mode i);

/// Gaussian contangle of mode i against all other modes: analytic on pure
/// states, zero on PPT states, numerical roof otherwise.
ContangleValue contangle_1_vs_rest(const CovarianceMatrix& cm, Mode i, const RoofOptions& options = {});

/// Gaussian contangle of a two-mode state.
ContangleValue gaussian_contangle_two_mode(const CovarianceMatrix& cm, const RoofOptions& options = {});

struct MonogamyReport {
  Mode focus_mode = 0;
  ContangleValue one_vs_rest;
  /// Partners in increasing mode order, aligned with `pairwise`.
  ModeSet partners;
  std::vector<ContangleValue> pairwise;
  /// one_vs_rest - sum(pairwise)
  double residual = 0.0;
};

/// Requires at least three modes.
MonogamyReport monogamy_check(const CovarianceMatrix& cm, Mode focus, const RoofOptions& options = {});

struct ResidualContangle {
  std::vector<MonogamyReport> per_focus;
  double minimum = 0.0;
};

/// Minimum over the three focus choices of a three-mode state.
ResidualContangle residual_contangle(const CovarianceMatrix& cm, const RoofOptions& options = {});

struct Promiscuity {
  double pairwise_contangle = 0.0;
  double residual = 0.0;
};

/// Pairwise and residual contangle of the pure symmetric three-mode state
/// with local mixedness b >= 1.
Promiscuity promiscuity_report(double b, const RoofOptions& options = {});

}  // namespace gaussent
