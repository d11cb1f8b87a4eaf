#pragma once

// Fully symmetric and bisymmetric multimode states.
//
// A state is bisymmetric with respect to an M|N split when it is invariant
// under permutations inside each block. Its M|N entanglement can be moved
// onto a single pair of modes by passive operations local to each block.

#include <optional>
#include <vector>

#include "gaussent/phasespace.hpp"

namespace gaussent {

/// k x k block matrix with `diag` on the diagonal and `offdiag` elsewhere.
/// Throws Unphysical if the result violates the uncertainty relation.
CovarianceMatrix fully_symmetric_cm(std::size_t k, const Matrix2& diag, const Matrix2& offdiag);

/// Cascade of n-1 beam splitters on neighbouring modes. Its mode matrix O has
/// first column 1/sqrt(n): a signal in input 0 is spread evenly over all
/// outputs. The transpose therefore collects the balanced sum of all inputs in
/// output 0.
SymplecticTransform n_splitter(std::size_t n);

/// Orthogonal n x n mode matrix underlying n_splitter(n).
Matrix n_splitter_modes(std::size_t n);

/// A p-squeezed input (r_p) on mode 0 and n-1 x-squeezed inputs (r_x), each
/// multiplied by `noise`, mixed on n_splitter(n).
CovarianceMatrix splitter_state(std::size_t n, double r_p, double r_x, double noise);

struct GhzTypeSpec {
  std::size_t n_modes = 2;
  double squeezing = 0.0;
  double thermal_noise = 1.0;

  /// Throws InvalidArgument for n < 2, r < 0 or noise < 1.
  void validate() const;
};

/// Equal-squeezer splitter state. Pure iff thermal_noise == 1.
CovarianceMatrix ghz_type_state(const GhzTypeSpec& spec);

/// Local mixedness b = 1/mu of a single mode of ghz_type_state.
double ghz_local_mixedness(std::size_t n_modes, double squeezing, double thermal_noise = 1.0);

/// Inverse of ghz_local_mixedness in the squeezing. Throws DomainError when
/// b is below the value reached at zero squeezing.
double ghz_squeezing_for_mixedness(std::size_t n_modes, double b, double thermal_noise = 1.0);

/// First `n_keep` modes of a pure ghz_type_state on n_keep + n_traced modes.
CovarianceMatrix traced_ghz_state(std::size_t n_keep, std::size_t n_traced, double squeezing);

struct BisymmetricSpec {
  std::size_t m = 1;
  std::size_t n = 1;
  Matrix2 alpha = Matrix2::Identity();
  std::optional<Matrix2> eps_alpha;  // required iff m > 1
  Matrix2 beta = Matrix2::Identity();
  std::optional<Matrix2> eps_beta;   // required iff n > 1
  Matrix2 gamma = Matrix2::Zero();
};

/// Throws InvalidArgument on inconsistent fields and Unphysical when the
/// assembled matrix is not a valid state.
CovarianceMatrix assemble_bisymmetric(const BisymmetricSpec& spec);

/// Per-entry tolerance used when checking the block pattern.
inline constexpr double kBisymmetryTol = 1e-8;

/// Reads the blocks of a state bisymmetric under the split
/// {0..m-1} | {m..N-1}. Throws NotBisymmetric naming the first offending pair
/// of blocks.
BisymmetricSpec detect_bisymmetric(const CovarianceMatrix& cm, std::size_t m);

struct SpectralDegeneracy {
  double nu_alpha_minus = 1.0;
  std::size_t mult_alpha = 0;  // m - 1
  double nu_beta_minus = 1.0;
  std::size_t mult_beta = 0;   // n - 1
  /// The global spectrum contains both values with the claimed multiplicity
  /// (matching within 1e-7).
  bool verified = false;
};

SpectralDegeneracy spectral_degeneracy(const CovarianceMatrix& cm, std::size_t m);

struct Localization {
  CovarianceMatrix eq_two_mode;
  /// m-1 modes of the first block followed by n-1 modes of the second.
  std::vector<CovarianceMatrix> residual_modes;
  SymplecticTransform s_local;
  /// apply_symplectic(cm, s_local); mode 0 and mode m hold the pair.
  CovarianceMatrix localized;
};

Localization unitary_localization(const CovarianceMatrix& cm, std::size_t m);

/// Log-negativity of the k | (N-k) split of a fully symmetric N-mode state,
/// evaluated on the localized pair.
double block_log_negativity(const CovarianceMatrix& cm, std::size_t k);

}  // namespace gaussent
