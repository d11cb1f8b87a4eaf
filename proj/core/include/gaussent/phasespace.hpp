#pragma once

// Covariance-matrix algebra for N-mode Gaussian states.
//
// Conventions used throughout the library:
//  * quadratures are ordered mode-major, (x1, p1, x2, p2, ...);
//  * the vacuum has covariance matrix equal to the identity;
//  * the symplectic form is Omega = diag(omega, ..., omega) with
//    omega = [[0, 1], [-1, 0]];
//  * modes are addressed by zero-based indices;
//  * logarithms are natural.

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gaussent/errors.hpp"

namespace gaussent {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Matrix2 = Eigen::Matrix2d;

using Mode = std::size_t;
using ModeSet = std::vector<Mode>;

/// Smallest admissible symplectic eigenvalue is 1 - kPhysicalityTol for
/// well-conditioned matrices; see physicality_tolerance().
inline constexpr double kPhysicalityTol = 1e-9;
/// |s_ij - s_ji| <= kSymmetryTol * max(1, |s_ij|).
inline constexpr double kSymmetryTol = 1e-10;
/// ||S^T Omega S - Omega||_max bound for a valid symplectic matrix.
inline constexpr double kSymplecticTol = 1e-8;

/// The 2N x 2N symplectic form.
Matrix symplectic_form(std::size_t n_modes);

/// Second-moment matrix of an N-mode Gaussian state.
///
/// Construction only checks shape and finiteness. Symmetry and the
/// uncertainty relation are checked by validate_cm() and by every operation
/// that needs a physical state. Partially transposed matrices are stored in
/// this type as well, so an instance is not necessarily a physical state.
class CovarianceMatrix {
 public:
  /// Throws DimensionMismatch unless `entries` is 2N x 2N with N >= 1, and
  /// NonFinite if any entry is NaN or infinite.
  explicit CovarianceMatrix(Matrix entries);

  static CovarianceMatrix vacuum(std::size_t n_modes);

  std::size_t n_modes() const noexcept { return static_cast<std::size_t>(m_.rows() / 2); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  /// 2x2 block coupling modes i and j.
  Matrix2 block(Mode i, Mode j) const;

 private:
  Matrix m_;
};

class SymplecticTransform {
 public:
  /// Throws DimensionMismatch for odd or non-square input and
  /// ConstraintViolation if S^T Omega S != Omega within kSymplecticTol.
  explicit SymplecticTransform(Matrix s);

  static SymplecticTransform identity(std::size_t n_modes);

  std::size_t n_modes() const noexcept { return static_cast<std::size_t>(s_.rows() / 2); }
  const Matrix& matrix() const noexcept { return s_; }

  SymplecticTransform inverse() const;

  /// True when the transform is orthogonal as well (beam splitters, phase
  /// shifters and their products).
  bool is_passive(double tol = 1e-10) const;

  friend SymplecticTransform operator*(const SymplecticTransform& a,
                                       const SymplecticTransform& b);

 private:
  struct Unchecked {};
  SymplecticTransform(Matrix s, Unchecked) : s_(std::move(s)) {}
  Matrix s_;
};

/// Nondecreasing list of symplectic eigenvalues.
struct SymplecticSpectrum {
  std::vector<double> values;
  /// Set for spectra of partially transposed matrices, which may drop below 1.
  bool partially_transposed = false;

  std::size_t size() const noexcept { return values.size(); }
  double min() const { return values.front(); }
  double max() const { return values.back(); }
  double operator[](std::size_t i) const { return values[i]; }
};

struct Bipartition {
  ModeSet side_a;
  ModeSet side_b;

  /// {0..k-1} | {k..n-1}
  static Bipartition split_after(std::size_t k, std::size_t n_modes);

  /// Throws IndexOutOfRange / InvalidArgument unless the sides are nonempty,
  /// disjoint and inside {0..n_modes-1}.
  void validate(std::size_t n_modes) const;
  bool covers(std::size_t n_modes) const noexcept;
};

struct ValidationReport {
  bool symmetric = false;
  bool physical = false;
  double nu_min = 0.0;
  /// physical means nu_min >= 1 - tolerance.
  double tolerance = kPhysicalityTol;
};

/// max(kPhysicalityTol, 8 eps cond(sigma)). Storing sigma in double precision
/// already perturbs its symplectic eigenvalues by about eps cond(sigma), so a
/// pure state squeezed by r cannot be checked more tightly than ~eps e^(4r).
double physicality_tolerance(const CovarianceMatrix& cm);

ValidationReport validate_cm(const CovarianceMatrix& cm);

/// Throws Unphysical when the matrix is asymmetric or violates the
/// uncertainty relation.
void require_physical(const CovarianceMatrix& cm);

/// Moduli of the eigenvalues of i*Omega*sigma, one copy per pair, ascending.
SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& cm);

/// (Det sigma)^(-1/2).
double purity(const CovarianceMatrix& cm);

/// Sum of squared symplectic eigenvalues. For two modes this is evaluated
/// as Det alpha + Det beta + 2 Det gamma.
double invariant_delta(const CovarianceMatrix& cm);

/// sigma = S diag(nu1, nu1, ..., nuN, nuN) S^T.
///
/// Note the transpose placement: S here acts on the Williamson form from the
/// left, which is the transpose of the sigma = S^T nu S convention. For
/// degenerate spectra S is not unique.
struct WilliamsonDecomposition {
  SymplecticTransform s;
  SymplecticSpectrum nu;
};

WilliamsonDecomposition williamson(const CovarianceMatrix& cm);

/// S sigma S^T.
CovarianceMatrix apply_symplectic(const CovarianceMatrix& cm, const SymplecticTransform& s);

CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b);
SymplecticTransform direct_sum(const SymplecticTransform& a, const SymplecticTransform& b);

/// Reduced state on `keep` (set semantics: sorted, duplicates ignored).
CovarianceMatrix partial_trace(const CovarianceMatrix& cm, const ModeSet& keep);

/// Reorders modes so that new mode k is old mode order[k].
CovarianceMatrix permute_modes(const CovarianceMatrix& cm, const ModeSet& order);

/// Flips the sign of the momentum rows and columns of every mode in `side`.
/// The result is in general not a physical covariance matrix.
CovarianceMatrix partial_transpose(const CovarianceMatrix& cm, const ModeSet& side);

/// Spectrum of the matrix partially transposed on `side`, flagged as such.
SymplecticSpectrum partial_transpose_spectrum(const CovarianceMatrix& cm, const ModeSet& side);

/// max{0, -sum_{nu~ < 1} log nu~} for the partial transpose on side_a.
double log_negativity(const CovarianceMatrix& cm, const Bipartition& bp);

enum class SqueezeKind { X, P };

/// Single-mode squeezer; the X kind is diag(e^-r, e^r).
SymplecticTransform make_squeezer(double r, SqueezeKind kind);
/// Single-mode rotation [[cos t, sin t], [-sin t, cos t]].
SymplecticTransform make_phase_rotation(double theta);
/// Mixes modes i and j by the same rotation in the x and p planes:
/// q_i -> cos t q_i + sin t q_j, q_j -> -sin t q_i + cos t q_j.
SymplecticTransform make_beam_splitter(double theta, Mode i, Mode j, std::size_t n_modes);

/// Places a single-mode transform on `target` of an n-mode system.
SymplecticTransform embed(const SymplecticTransform& local, Mode target, std::size_t n_modes);

/// Lifts an n x n real orthogonal mode matrix to the passive transform
/// acting identically on positions and momenta.
SymplecticTransform passive_from_orthogonal(const Matrix& o);

/// Covariance matrix of the two-mode squeezed vacuum,
/// [[cosh 2r I, sinh 2r Z], [sinh 2r Z, cosh 2r I]] with Z = diag(1, -1).
CovarianceMatrix two_mode_squeezed_vacuum(double r);

}  // namespace gaussent
