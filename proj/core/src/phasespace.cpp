#include "gaussent/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace gaussent {

namespace {

std::string describe_shape(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void check_mode(Mode m, std::size_t n_modes, const char* what) {
  if (m >= n_modes) {
    std::ostringstream os;
    os << what << ": mode " << m << " out of range for " << n_modes << " modes";
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Square root of a symmetric positive-definite matrix, or nothing when the
// matrix is not positive definite.
struct MatrixRoot {
  Matrix half;
  bool positive_definite = false;
};

MatrixRoot spd_sqrt(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::DegenerateNumerics, "symmetric eigensolver did not converge");
  }
  const Vector& lambda = es.eigenvalues();
  MatrixRoot root;
  if (lambda.minCoeff() <= 0.0) return root;
  root.half = es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  root.positive_definite = true;
  return root;
}

// Fallback for indefinite input: moduli of the eigenvalues of Omega*sigma.
std::vector<double> spectrum_general(const Matrix& s) {
  const auto n = static_cast<std::size_t>(s.rows() / 2);
  Eigen::EigenSolver<Matrix> es(symplectic_form(n) * s, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::DegenerateNumerics, "general eigensolver did not converge");
  }
  std::vector<double> moduli(static_cast<std::size_t>(s.rows()));
  for (Eigen::Index i = 0; i < s.rows(); ++i) moduli[i] = std::abs(es.eigenvalues()[i]);
  std::sort(moduli.begin(), moduli.end());
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = 0.5 * (moduli[2 * k] + moduli[2 * k + 1]);
  return out;
}

// Singular values of sigma^(1/2) Omega sigma^(1/2) are the symplectic
// eigenvalues, each appearing twice.
std::vector<double> spectrum_values(const Matrix& raw) {
  const Matrix s = symmetrized(raw);
  const auto n = static_cast<std::size_t>(s.rows() / 2);
  const MatrixRoot root = spd_sqrt(s);
  if (!root.positive_definite) return spectrum_general(s);
  const Matrix a = root.half * symplectic_form(n) * root.half;
  Eigen::JacobiSVD<Matrix> svd(a);
  Vector sv = svd.singularValues();
  std::vector<double> sorted(sv.data(), sv.data() + sv.size());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = 0.5 * (sorted[2 * k] + sorted[2 * k + 1]);
  return out;
}

bool is_symmetric(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      const double scale = std::max(1.0, std::abs(m(i, j)));
      if (std::abs(m(i, j) - m(j, i)) > kSymmetryTol * scale) return false;
    }
  }
  return true;
}

ModeSet normalized_set(const ModeSet& modes) {
  ModeSet out = modes;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Eigen::Index> quadrature_indices(const ModeSet& modes) {
  std::vector<Eigen::Index> idx;
  idx.reserve(modes.size() * 2);
  for (Mode m : modes) {
    idx.push_back(static_cast<Eigen::Index>(2 * m));
    idx.push_back(static_cast<Eigen::Index>(2 * m + 1));
  }
  return idx;
}

}  // namespace

Matrix symplectic_form(std::size_t n_modes) {
  Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

// ---------------------------------------------------------------------------
// CovarianceMatrix

CovarianceMatrix::CovarianceMatrix(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols() || m_.rows() % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "covariance matrix must be 2N x 2N, got " + describe_shape(m_));
  }
  if (!m_.allFinite()) {
    throw Error(ErrorKind::NonFinite, "covariance matrix has NaN or infinite entries");
  }
}

CovarianceMatrix CovarianceMatrix::vacuum(std::size_t n_modes) {
  if (n_modes == 0) throw Error(ErrorKind::DimensionMismatch, "vacuum needs at least one mode");
  return CovarianceMatrix(Matrix::Identity(2 * n_modes, 2 * n_modes));
}

Matrix2 CovarianceMatrix::block(Mode i, Mode j) const {
  check_mode(i, n_modes(), "block");
  check_mode(j, n_modes(), "block");
  return m_.block<2, 2>(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(2 * j));
}

// ---------------------------------------------------------------------------
// SymplecticTransform

SymplecticTransform::SymplecticTransform(Matrix s) : s_(std::move(s)) {
  if (s_.rows() == 0 || s_.rows() != s_.cols() || s_.rows() % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "symplectic matrix must be 2N x 2N, got " + describe_shape(s_));
  }
  if (!s_.allFinite()) throw Error(ErrorKind::NonFinite, "symplectic matrix is not finite");
  const Matrix omega = symplectic_form(n_modes());
  const double defect = (s_.transpose() * omega * s_ - omega).cwiseAbs().maxCoeff();
  if (defect > kSymplecticTol) {
    std::ostringstream os;
    os << "matrix is not symplectic: ||S^T Omega S - Omega||_max = " << defect;
    throw Error(ErrorKind::ConstraintViolation, os.str());
  }
}

SymplecticTransform SymplecticTransform::identity(std::size_t n_modes) {
  return SymplecticTransform(Matrix::Identity(2 * n_modes, 2 * n_modes), Unchecked{});
}

SymplecticTransform SymplecticTransform::inverse() const {
  // S^-1 = Omega^T S^T Omega for symplectic S.
  const Matrix omega = symplectic_form(n_modes());
  return SymplecticTransform(Matrix(omega.transpose() * s_.transpose() * omega), Unchecked{});
}

bool SymplecticTransform::is_passive(double tol) const {
  const Matrix gram = s_.transpose() * s_;
  return (gram - Matrix::Identity(s_.rows(), s_.cols())).cwiseAbs().maxCoeff() <= tol;
}

SymplecticTransform operator*(const SymplecticTransform& a, const SymplecticTransform& b) {
  if (a.n_modes() != b.n_modes()) {
    throw Error(ErrorKind::DimensionMismatch, "cannot compose transforms of different size");
  }
  return SymplecticTransform(Matrix(a.s_ * b.s_), SymplecticTransform::Unchecked{});
}

// ---------------------------------------------------------------------------
// Bipartition

Bipartition Bipartition::split_after(std::size_t k, std::size_t n_modes) {
  if (k == 0 || k >= n_modes) {
    throw Error(ErrorKind::InvalidArgument, "split point must leave both sides nonempty");
  }
  Bipartition bp;
  for (std::size_t i = 0; i < n_modes; ++i) (i < k ? bp.side_a : bp.side_b).push_back(i);
  return bp;
}

void Bipartition::validate(std::size_t n_modes) const {
  if (side_a.empty() || side_b.empty()) {
    throw Error(ErrorKind::InvalidArgument, "both sides of a bipartition must be nonempty");
  }
  for (Mode m : side_a) check_mode(m, n_modes, "bipartition");
  for (Mode m : side_b) check_mode(m, n_modes, "bipartition");
  const ModeSet a = normalized_set(side_a);
  const ModeSet b = normalized_set(side_b);
  ModeSet common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  if (!common.empty()) throw Error(ErrorKind::InvalidArgument, "bipartition sides overlap");
}

bool Bipartition::covers(std::size_t n_modes) const noexcept {
  ModeSet all = side_a;
  all.insert(all.end(), side_b.begin(), side_b.end());
  all = normalized_set(all);
  return all.size() == n_modes && (n_modes == 0 || all.back() == n_modes - 1);
}

// ---------------------------------------------------------------------------
// Validation and invariants

double physicality_tolerance(const CovarianceMatrix& cm) {
  // Rounding sigma entry-wise moves its symplectic eigenvalues by up to about
  // eps * cond(sigma), which exceeds the fixed floor for strongly squeezed states.
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(cm.matrix()), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return kPhysicalityTol;
  return std::max(kPhysicalityTol, 8.0 * std::numeric_limits<double>::epsilon() * hi / lo);
}

ValidationReport validate_cm(const CovarianceMatrix& cm) {
  ValidationReport report;
  report.symmetric = is_symmetric(cm.matrix());
  report.nu_min = spectrum_values(cm.matrix()).front();
  report.tolerance = physicality_tolerance(cm);
  report.physical = report.symmetric && report.nu_min >= 1.0 - report.tolerance;
  return report;
}

void require_physical(const CovarianceMatrix& cm) {
  const ValidationReport report = validate_cm(cm);
  if (!report.symmetric) throw Error(ErrorKind::Unphysical, "covariance matrix is not symmetric");
  if (!report.physical) {
    std::ostringstream os;
    os << "uncertainty relation violated: smallest symplectic eigenvalue " << report.nu_min;
    throw Error(ErrorKind::Unphysical, os.str());
  }
}

SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& cm) {
  return SymplecticSpectrum{spectrum_values(cm.matrix()), false};
}

double purity(const CovarianceMatrix& cm) {
  require_physical(cm);
  return 1.0 / std::sqrt(cm.matrix().determinant());
}

double invariant_delta(const CovarianceMatrix& cm) {
  require_physical(cm);
  if (cm.n_modes() == 2) {
    return cm.block(0, 0).determinant() + cm.block(1, 1).determinant() +
           2.0 * cm.block(0, 1).determinant();
  }
  const auto nu = spectrum_values(cm.matrix());
  return std::accumulate(nu.begin(), nu.end(), 0.0, [](double acc, double v) { return acc + v * v; });
}

// ---------------------------------------------------------------------------
// Williamson decomposition
//
// With A = sigma^(1/2) Omega sigma^(1/2) antisymmetric, an orthogonal O with
// O^T A O = diag(nu) Omega gives S = sigma^(1/2) O diag(nu)^(-1/2). The
// columns of O are built pairwise from eigenvectors u of A^T A and their
// partners -A u / nu, deflating against the pairs chosen so far.

WilliamsonDecomposition williamson(const CovarianceMatrix& cm) {
  const Matrix sigma = symmetrized(cm.matrix());
  const std::size_t n = cm.n_modes();
  const auto dim = static_cast<Eigen::Index>(2 * n);
  const MatrixRoot root = spd_sqrt(sigma);
  if (!root.positive_definite) {
    throw Error(ErrorKind::NotPositiveDefinite, "Williamson decomposition needs sigma > 0");
  }
  const Matrix a = root.half * symplectic_form(n) * root.half;
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(a.transpose() * a));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::DegenerateNumerics, "eigensolver failed in Williamson decomposition");
  }
  const Matrix& candidates = es.eigenvectors();

  Matrix basis = Matrix::Zero(dim, dim);
  std::vector<double> nu(n);
  std::vector<bool> used(static_cast<std::size_t>(dim), false);

  auto deflate = [&](Vector v, Eigen::Index filled) {
    for (int pass = 0; pass < 2; ++pass) {
      if (filled > 0) {
        const auto q = basis.leftCols(filled);
        v -= q * (q.transpose() * v);
      }
    }
    return v;
  };

  for (std::size_t k = 0; k < n; ++k) {
    const auto filled = static_cast<Eigen::Index>(2 * k);
    Eigen::Index best = -1;
    double best_norm = 0.0;
    Vector best_vec;
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      Vector v = deflate(candidates.col(j), filled);
      const double norm = v.norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = j;
        best_vec = std::move(v);
      }
    }
    if (best < 0 || best_norm < 1e-6) {
      throw Error(ErrorKind::DegenerateNumerics, "could not complete the symplectic basis");
    }
    used[static_cast<std::size_t>(best)] = true;
    const Vector e1 = best_vec / best_norm;
    Vector e2 = deflate(Vector(-a * e1), filled);
    e2 -= e1 * e1.dot(e2);
    const double norm2 = e2.norm();
    if (!(norm2 > 0.0)) throw Error(ErrorKind::DegenerateNumerics, "zero symplectic eigenvalue");
    e2 /= norm2;
    basis.col(filled) = e1;
    basis.col(filled + 1) = e2;
    nu[k] = e1.dot(a * e2);
  }

  // Order the pairs by ascending symplectic eigenvalue.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return nu[l] < nu[r]; });
  Matrix sorted_basis(dim, dim);
  std::vector<double> sorted_nu(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = static_cast<Eigen::Index>(2 * order[k]);
    sorted_basis.col(2 * k) = basis.col(src);
    sorted_basis.col(2 * k + 1) = basis.col(src + 1);
    sorted_nu[k] = nu[order[k]];
  }

  Vector inv_sqrt_nu(dim);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(sorted_nu[k] > 0.0)) {
      throw Error(ErrorKind::DegenerateNumerics, "nonpositive symplectic eigenvalue");
    }
    inv_sqrt_nu(2 * k) = inv_sqrt_nu(2 * k + 1) = 1.0 / std::sqrt(sorted_nu[k]);
  }
  Matrix s = root.half * sorted_basis * inv_sqrt_nu.asDiagonal();
  return WilliamsonDecomposition{SymplecticTransform(std::move(s)),
                                 SymplecticSpectrum{std::move(sorted_nu), false}};
}

// ---------------------------------------------------------------------------
// Structural operations

CovarianceMatrix apply_symplectic(const CovarianceMatrix& cm, const SymplecticTransform& s) {
  if (cm.n_modes() != s.n_modes()) {
    throw Error(ErrorKind::DimensionMismatch, "transform and covariance matrix sizes differ");
  }
  Matrix out = s.matrix() * cm.matrix() * s.matrix().transpose();
  return CovarianceMatrix(symmetrized(out));
}

CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  const auto da = a.matrix().rows();
  const auto db = b.matrix().rows();
  Matrix out = Matrix::Zero(da + db, da + db);
  out.topLeftCorner(da, da) = a.matrix();
  out.bottomRightCorner(db, db) = b.matrix();
  return CovarianceMatrix(std::move(out));
}

SymplecticTransform direct_sum(const SymplecticTransform& a, const SymplecticTransform& b) {
  const auto da = a.matrix().rows();
  const auto db = b.matrix().rows();
  Matrix out = Matrix::Zero(da + db, da + db);
  out.topLeftCorner(da, da) = a.matrix();
  out.bottomRightCorner(db, db) = b.matrix();
  return SymplecticTransform(std::move(out));
}

CovarianceMatrix partial_trace(const CovarianceMatrix& cm, const ModeSet& keep) {
  if (keep.empty()) throw Error(ErrorKind::EmptyKeepSet, "partial trace must keep at least one mode");
  for (Mode m : keep) check_mode(m, cm.n_modes(), "partial_trace");
  const auto idx = quadrature_indices(normalized_set(keep));
  return CovarianceMatrix(Matrix(cm.matrix()(idx, idx)));
}

CovarianceMatrix permute_modes(const CovarianceMatrix& cm, const ModeSet& order) {
  if (order.size() != cm.n_modes() || normalized_set(order).size() != order.size()) {
    throw Error(ErrorKind::InvalidArgument, "mode order must be a permutation");
  }
  for (Mode m : order) check_mode(m, cm.n_modes(), "permute_modes");
  const auto idx = quadrature_indices(order);
  return CovarianceMatrix(Matrix(cm.matrix()(idx, idx)));
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& cm, const ModeSet& side) {
  const ModeSet modes = normalized_set(side);
  for (Mode m : modes) check_mode(m, cm.n_modes(), "partial_transpose");
  if (modes.empty() || modes.size() == cm.n_modes()) {
    throw Error(ErrorKind::InvalidArgument, "partial transpose needs a proper nonempty subset");
  }
  Matrix out = cm.matrix();
  for (Mode m : modes) {
    const auto p = static_cast<Eigen::Index>(2 * m + 1);
    out.row(p) *= -1.0;
    out.col(p) *= -1.0;
  }
  return CovarianceMatrix(std::move(out));
}

SymplecticSpectrum partial_transpose_spectrum(const CovarianceMatrix& cm, const ModeSet& side) {
  return SymplecticSpectrum{spectrum_values(partial_transpose(cm, side).matrix()), true};
}

double log_negativity(const CovarianceMatrix& cm, const Bipartition& bp) {
  bp.validate(cm.n_modes());
  if (!bp.covers(cm.n_modes())) {
    throw Error(ErrorKind::InvalidArgument, "bipartition must cover every mode");
  }
  require_physical(cm);
  const SymplecticSpectrum pt = partial_transpose_spectrum(cm, bp.side_a);
  double sum = 0.0;
  for (double v : pt.values) {
    if (v < 1.0) sum -= std::log(v);
  }
  return std::max(0.0, sum);
}

// ---------------------------------------------------------------------------
// Elementary optical transforms

SymplecticTransform make_squeezer(double r, SqueezeKind kind) {
  if (!std::isfinite(r)) throw Error(ErrorKind::NonFinite, "squeezing parameter must be finite");
  const double x = kind == SqueezeKind::X ? -r : r;
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = std::exp(x);
  s(1, 1) = std::exp(-x);
  return SymplecticTransform(std::move(s));
}

SymplecticTransform make_phase_rotation(double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorKind::NonFinite, "rotation angle must be finite");
  Matrix s(2, 2);
  s << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return SymplecticTransform(std::move(s));
}

SymplecticTransform make_beam_splitter(double theta, Mode i, Mode j, std::size_t n_modes) {
  if (!std::isfinite(theta)) throw Error(ErrorKind::NonFinite, "beam splitter angle must be finite");
  check_mode(i, n_modes, "make_beam_splitter");
  check_mode(j, n_modes, "make_beam_splitter");
  if (i == j) throw Error(ErrorKind::InvalidArgument, "beam splitter needs two distinct modes");
  Matrix o = Matrix::Identity(static_cast<Eigen::Index>(n_modes), static_cast<Eigen::Index>(n_modes));
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  o(ii, ii) = std::cos(theta);
  o(ii, jj) = std::sin(theta);
  o(jj, ii) = -std::sin(theta);
  o(jj, jj) = std::cos(theta);
  return passive_from_orthogonal(o);
}

SymplecticTransform embed(const SymplecticTransform& local, Mode target, std::size_t n_modes) {
  if (local.n_modes() != 1) throw Error(ErrorKind::DimensionMismatch, "embed expects a single-mode transform");
  check_mode(target, n_modes, "embed");
  Matrix s = Matrix::Identity(static_cast<Eigen::Index>(2 * n_modes), static_cast<Eigen::Index>(2 * n_modes));
  s.block<2, 2>(static_cast<Eigen::Index>(2 * target), static_cast<Eigen::Index>(2 * target)) = local.matrix();
  return SymplecticTransform(std::move(s));
}

SymplecticTransform passive_from_orthogonal(const Matrix& o) {
  if (o.rows() != o.cols() || o.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "mode matrix must be square");
  }
  const Eigen::Index n = o.rows();
  if ((o.transpose() * o - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorKind::ConstraintViolation, "mode matrix is not orthogonal");
  }
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      s(2 * r, 2 * c) = o(r, c);
      s(2 * r + 1, 2 * c + 1) = o(r, c);
    }
  }
  return SymplecticTransform(std::move(s));
}

CovarianceMatrix two_mode_squeezed_vacuum(double r) {
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  Matrix s(4, 4);
  s << ch, 0, sh, 0,
       0, ch, 0, -sh,
       sh, 0, ch, 0,
       0, -sh, 0, ch;
  return CovarianceMatrix(std::move(s));
}

}  // namespace gaussent
