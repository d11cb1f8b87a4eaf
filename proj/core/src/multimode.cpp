#include "gaussent/multimode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gaussent {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void check_block_count(std::size_t k, const char* what) {
  if (k == 0) {
    std::ostringstream os;
    os << what << ": block must contain at least one mode";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

bool blocks_match(const Matrix2& a, const Matrix2& b) {
  return (a - b).cwiseAbs().maxCoeff() <= kBisymmetryTol;
}

[[noreturn]] void not_bisymmetric(std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) {
  std::ostringstream os;
  os << "block (" << i1 << ", " << j1 << ") differs from block (" << i2 << ", " << j2 << ")";
  throw Error(ErrorKind::NotBisymmetric, os.str());
}

std::size_t count_near(const std::vector<double>& values, double target, double tol) {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(),
                                                [&](double v) { return std::abs(v - target) <= tol; }));
}

}  // namespace

CovarianceMatrix fully_symmetric_cm(std::size_t k, const Matrix2& diag, const Matrix2& offdiag) {
  check_block_count(k, "fully_symmetric_cm");
  Matrix m(2 * idx(k), 2 * idx(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      m.block<2, 2>(2 * idx(i), 2 * idx(j)) = i == j ? diag : (i < j ? offdiag : Matrix2(offdiag.transpose()));
    }
  }
  CovarianceMatrix cm(std::move(m));
  require_physical(cm);
  return cm;
}

Matrix n_splitter_modes(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "an N-splitter needs at least two modes");
  Matrix o = Matrix::Identity(idx(n), idx(n));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    // Sends 1/sqrt(n) of the amplitude still held by mode k to the output
    // and passes the rest to mode k+1.
    const double c = 1.0 / std::sqrt(static_cast<double>(n - k));
    const double s = -std::sqrt(1.0 - c * c);
    Matrix bs = Matrix::Identity(idx(n), idx(n));
    bs(idx(k), idx(k)) = c;
    bs(idx(k), idx(k + 1)) = s;
    bs(idx(k + 1), idx(k)) = -s;
    bs(idx(k + 1), idx(k + 1)) = c;
    o = bs * o;
  }
  return o;
}

SymplecticTransform n_splitter(std::size_t n) { return passive_from_orthogonal(n_splitter_modes(n)); }

CovarianceMatrix splitter_state(std::size_t n, double r_p, double r_x, double noise) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "splitter state needs at least two modes");
  if (!std::isfinite(r_p) || !std::isfinite(r_x) || !std::isfinite(noise)) {
    throw Error(ErrorKind::NonFinite, "splitter state parameters must be finite");
  }
  if (noise < 1.0) throw Error(ErrorKind::InvalidArgument, "thermal noise factor must be >= 1");
  Matrix in = Matrix::Zero(2 * idx(n), 2 * idx(n));
  in(0, 0) = noise * std::exp(2.0 * r_p);
  in(1, 1) = noise * std::exp(-2.0 * r_p);
  for (std::size_t k = 1; k < n; ++k) {
    in(2 * idx(k), 2 * idx(k)) = noise * std::exp(-2.0 * r_x);
    in(2 * idx(k) + 1, 2 * idx(k) + 1) = noise * std::exp(2.0 * r_x);
  }
  return apply_symplectic(CovarianceMatrix(std::move(in)), n_splitter(n));
}

void GhzTypeSpec::validate() const {
  if (n_modes < 2) throw Error(ErrorKind::InvalidArgument, "GHZ-type state needs at least two modes");
  if (!(squeezing >= 0.0) || !std::isfinite(squeezing)) {
    throw Error(ErrorKind::InvalidArgument, "squeezing must be finite and nonnegative");
  }
  if (!(thermal_noise >= 1.0) || !std::isfinite(thermal_noise)) {
    throw Error(ErrorKind::InvalidArgument, "thermal noise factor must be finite and >= 1");
  }
}

CovarianceMatrix ghz_type_state(const GhzTypeSpec& spec) {
  spec.validate();
  return splitter_state(spec.n_modes, spec.squeezing, spec.squeezing, spec.thermal_noise);
}

// Each output mode receives weight 1/n of the p-squeezed input and (n-1)/n of
// the x-squeezed ones, so
//   n^2 b^2 / noise^2 = 1 + (n-1)^2 + 2 (n-1) cosh 4r.
double ghz_local_mixedness(std::size_t n_modes, double squeezing, double thermal_noise) {
  GhzTypeSpec{n_modes, squeezing, thermal_noise}.validate();
  const double n = static_cast<double>(n_modes);
  const double b2 = 1.0 + (n - 1.0) * (n - 1.0) + 2.0 * (n - 1.0) * std::cosh(4.0 * squeezing);
  return thermal_noise * std::sqrt(b2) / n;
}

double ghz_squeezing_for_mixedness(std::size_t n_modes, double b, double thermal_noise) {
  GhzTypeSpec{n_modes, 0.0, thermal_noise}.validate();
  const double n = static_cast<double>(n_modes);
  const double scaled = b / thermal_noise;
  if (!std::isfinite(b) || scaled < 1.0 - 1e-12) {
    std::ostringstream os;
    os << "local mixedness " << b << " is below the unsqueezed value " << thermal_noise;
    throw Error(ErrorKind::DomainError, os.str());
  }
  const double t = (scaled * scaled * n * n - 1.0 - (n - 1.0) * (n - 1.0)) / (2.0 * (n - 1.0));
  return 0.25 * std::acosh(std::max(1.0, t));
}

CovarianceMatrix traced_ghz_state(std::size_t n_keep, std::size_t n_traced, double squeezing) {
  check_block_count(n_keep, "traced_ghz_state");
  const CovarianceMatrix pure = ghz_type_state(GhzTypeSpec{n_keep + n_traced, squeezing, 1.0});
  if (n_traced == 0) return pure;
  ModeSet keep(n_keep);
  std::iota(keep.begin(), keep.end(), Mode{0});
  return partial_trace(pure, keep);
}

CovarianceMatrix assemble_bisymmetric(const BisymmetricSpec& spec) {
  check_block_count(spec.m, "assemble_bisymmetric");
  check_block_count(spec.n, "assemble_bisymmetric");
  if ((spec.m > 1) != spec.eps_alpha.has_value() || (spec.n > 1) != spec.eps_beta.has_value()) {
    throw Error(ErrorKind::InvalidArgument,
                "intra-block correlations are required exactly when a block has more than one mode");
  }
  const std::size_t total = spec.m + spec.n;
  Matrix s(2 * idx(total), 2 * idx(total));
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      const bool ia = i < spec.m;
      const bool ja = j < spec.m;
      Matrix2 blk;
      if (ia && ja) {
        blk = i == j ? spec.alpha : *spec.eps_alpha;
      } else if (!ia && !ja) {
        blk = i == j ? spec.beta : *spec.eps_beta;
      } else {
        blk = ia ? spec.gamma : Matrix2(spec.gamma.transpose());
      }
      s.block<2, 2>(2 * idx(i), 2 * idx(j)) = blk;
    }
  }
  CovarianceMatrix cm(std::move(s));
  require_physical(cm);
  return cm;
}

BisymmetricSpec detect_bisymmetric(const CovarianceMatrix& cm, std::size_t m) {
  const std::size_t total = cm.n_modes();
  if (m == 0 || m >= total) {
    std::ostringstream os;
    os << "split after " << m << " modes is not a bipartition of " << total << " modes";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  BisymmetricSpec spec;
  spec.m = m;
  spec.n = total - m;
  spec.alpha = cm.block(0, 0);
  spec.beta = cm.block(m, m);
  spec.gamma = cm.block(0, m);
  if (spec.m > 1) spec.eps_alpha = cm.block(0, 1);
  if (spec.n > 1) spec.eps_beta = cm.block(m, m + 1);

  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      const bool ia = i < m;
      const bool ja = j < m;
      Matrix2 ref;
      std::size_t ri = 0;
      std::size_t rj = 0;
      if (ia && ja) {
        ref = i == j ? spec.alpha : *spec.eps_alpha;
        rj = i == j ? 0 : 1;
      } else if (!ia && !ja) {
        ref = i == j ? spec.beta : *spec.eps_beta;
        ri = m;
        rj = i == j ? m : m + 1;
      } else if (ia) {
        ref = spec.gamma;
        rj = m;
      } else {
        ref = spec.gamma.transpose();
        ri = m;
      }
      if (!blocks_match(cm.block(i, j), ref)) not_bisymmetric(i, j, ri, rj);
    }
  }
  // Intra-block correlations must also be symmetric under swapping the pair.
  if (spec.eps_alpha) {
    const Matrix2 e = *spec.eps_alpha;
    if (!blocks_match(e, e.transpose())) not_bisymmetric(0, 1, 1, 0);
  }
  if (spec.eps_beta) {
    const Matrix2 e = *spec.eps_beta;
    if (!blocks_match(e, e.transpose())) not_bisymmetric(m, m + 1, m + 1, m);
  }
  return spec;
}

SpectralDegeneracy spectral_degeneracy(const CovarianceMatrix& cm, std::size_t m) {
  const BisymmetricSpec spec = detect_bisymmetric(cm, m);
  require_physical(cm);
  SpectralDegeneracy out;
  out.mult_alpha = spec.m - 1;
  out.mult_beta = spec.n - 1;
  if (spec.eps_alpha) out.nu_alpha_minus = std::sqrt((spec.alpha - *spec.eps_alpha).determinant());
  if (spec.eps_beta) out.nu_beta_minus = std::sqrt((spec.beta - *spec.eps_beta).determinant());

  constexpr double tol = 1e-7;
  const std::vector<double> nu = symplectic_spectrum(cm).values;
  const bool shared = out.mult_alpha > 0 && out.mult_beta > 0 &&
                      std::abs(out.nu_alpha_minus - out.nu_beta_minus) <= tol;
  if (shared) {
    out.verified = count_near(nu, out.nu_alpha_minus, tol) >= out.mult_alpha + out.mult_beta;
  } else {
    out.verified = (out.mult_alpha == 0 || count_near(nu, out.nu_alpha_minus, tol) >= out.mult_alpha) &&
                   (out.mult_beta == 0 || count_near(nu, out.nu_beta_minus, tol) >= out.mult_beta);
  }
  return out;
}

// The transposed splitter collects the balanced sum of each block in its
// first mode; the remaining outputs are orthogonal to that sum and decouple.
Localization unitary_localization(const CovarianceMatrix& cm, std::size_t m) {
  const BisymmetricSpec spec = detect_bisymmetric(cm, m);
  require_physical(cm);
  const std::size_t n = spec.n;
  Matrix o = Matrix::Zero(idx(m + n), idx(m + n));
  o.topLeftCorner(idx(m), idx(m)) = m > 1 ? Matrix(n_splitter_modes(m).transpose()) : Matrix::Identity(1, 1);
  o.bottomRightCorner(idx(n), idx(n)) = n > 1 ? Matrix(n_splitter_modes(n).transpose()) : Matrix::Identity(1, 1);
  SymplecticTransform s = passive_from_orthogonal(o);
  CovarianceMatrix localized = apply_symplectic(cm, s);

  std::vector<CovarianceMatrix> residual;
  residual.reserve(m + n - 2);
  for (std::size_t k = 1; k < m; ++k) residual.emplace_back(Matrix(localized.block(k, k)));
  for (std::size_t k = m + 1; k < m + n; ++k) residual.emplace_back(Matrix(localized.block(k, k)));

  CovarianceMatrix eq = partial_trace(localized, ModeSet{0, m});
  return Localization{std::move(eq), std::move(residual), std::move(s), std::move(localized)};
}

double block_log_negativity(const CovarianceMatrix& cm, std::size_t k) {
  const Localization loc = unitary_localization(cm, k);
  return log_negativity(loc.eq_two_mode, Bipartition::split_after(1, 2));
}

}  // namespace gaussent
