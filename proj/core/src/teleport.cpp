#include "gaussent/teleport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gaussent/multimode.hpp"
#include "gaussent/twomode.hpp"
#include "minimize.hpp"

namespace gaussent {

namespace {

constexpr int kScanPoints = 64;
constexpr double kBiasTol = 1e-8;

const Matrix2 kZ = (Matrix2() << 1.0, 0.0, 0.0, -1.0).finished();

}  // namespace

void TeleportResourceSpec::validate() const {
  if (n_parties < 2) throw Error(ErrorKind::InvalidArgument, "a teleportation network needs two parties");
  if (!std::isfinite(r1) || !std::isfinite(r2) || r1 < 0.0 || r2 < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "squeezing parameters must be finite and nonnegative");
  }
  if (!std::isfinite(noise) || noise < 1.0) {
    throw Error(ErrorKind::InvalidArgument, "thermal noise factor must be finite and >= 1");
  }
}

CovarianceMatrix build_resource(const TeleportResourceSpec& spec) {
  spec.validate();
  return splitter_state(spec.n_parties, spec.r1, spec.r2, spec.noise);
}

CovarianceMatrix homodyne_condition(const CovarianceMatrix& cm, Mode mode, Quadrature q) {
  const std::size_t n = cm.n_modes();
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "homodyne conditioning needs at least two modes");
  if (mode >= n) {
    std::ostringstream os;
    os << "measured mode " << mode << " out of range for " << n << " modes";
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
  require_physical(cm);
  std::vector<Eigen::Index> keep;
  for (Mode k = 0; k < n; ++k) {
    if (k == mode) continue;
    keep.push_back(static_cast<Eigen::Index>(2 * k));
    keep.push_back(static_cast<Eigen::Index>(2 * k + 1));
  }
  const auto row = static_cast<Eigen::Index>(2 * mode + (q == Quadrature::P ? 1 : 0));
  const Matrix& s = cm.matrix();
  const Matrix a = s(keep, keep);
  const Vector c = s(keep, std::vector<Eigen::Index>{row});
  // (Pi B Pi)^+ has the single nonzero entry 1 / B_qq.
  Matrix out = a - c * c.transpose() / s(row, row);
  return CovarianceMatrix(0.5 * (out + out.transpose()));
}

CovarianceMatrix bk_output_cm(const CovarianceMatrix& resource) {
  if (resource.n_modes() != 2) throw Error(ErrorKind::DimensionMismatch, "expected a two-mode resource");
  const Matrix2 alpha = resource.block(0, 0);
  const Matrix2 beta = resource.block(1, 1);
  const Matrix2 gamma = resource.block(0, 1);
  const Matrix2 out = Matrix2::Identity() + kZ * alpha * kZ + beta - kZ * gamma - gamma.transpose() * kZ;
  return CovarianceMatrix(Matrix(0.5 * (out + out.transpose())));
}

double fidelity_coherent(const CovarianceMatrix& sigma_out) {
  if (sigma_out.n_modes() != 1) throw Error(ErrorKind::DimensionMismatch, "expected a single-mode output");
  require_physical(sigma_out);
  return 2.0 / std::sqrt((Matrix2::Identity() + sigma_out.block(0, 0)).determinant());
}

namespace {

// Conditions every helper on a p measurement in one Schur complement (the
// sequential and joint conditionings agree) and teleports between the pair.
double pair_fidelity(const CovarianceMatrix& resource, Mode sender, Mode receiver) {
  const std::size_t n = resource.n_modes();
  const std::vector<Eigen::Index> pair{static_cast<Eigen::Index>(2 * sender), static_cast<Eigen::Index>(2 * sender + 1),
                                       static_cast<Eigen::Index>(2 * receiver),
                                       static_cast<Eigen::Index>(2 * receiver + 1)};
  std::vector<Eigen::Index> helpers_p;
  for (Mode k = 0; k < n; ++k) {
    if (k != sender && k != receiver) helpers_p.push_back(static_cast<Eigen::Index>(2 * k + 1));
  }
  const Matrix& s = resource.matrix();
  Matrix reduced = s(pair, pair);
  if (!helpers_p.empty()) {
    const Matrix c = s(pair, helpers_p);
    const Matrix b = s(helpers_p, helpers_p);
    reduced -= c * b.llt().solve(c.transpose());
  }
  return fidelity_coherent(bk_output_cm(CovarianceMatrix(Matrix(0.5 * (reduced + reduced.transpose())))));
}

}  // namespace

double network_fidelity(const CovarianceMatrix& resource, Mode sender, Mode receiver) {
  const std::size_t n = resource.n_modes();
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "a teleportation network needs two parties");
  if (sender >= n || receiver >= n) throw Error(ErrorKind::IndexOutOfRange, "sender or receiver out of range");
  if (sender == receiver) throw Error(ErrorKind::InvalidArgument, "sender and receiver must differ");
  require_physical(resource);
  return pair_fidelity(resource, sender, receiver);
}

FidelityResult optimal_fidelity(std::size_t n_parties, double r_bar, double noise) {
  TeleportResourceSpec{n_parties, r_bar, r_bar, noise}.validate();
  auto fidelity_at = [&](double d) {
    const double r1 = std::max(0.0, r_bar + 0.5 * d);
    const double r2 = std::max(0.0, r_bar - 0.5 * d);
    // Physical by construction, so the full validation is skipped.
    return pair_fidelity(build_resource(TeleportResourceSpec{n_parties, r1, r2, noise}), 0, 1);
  };

  FidelityResult out;
  if (r_bar == 0.0) {
    out.fidelity = fidelity_at(0.0);
    out.e_t = entanglement_of_teleportation(out.fidelity);
    return out;
  }

  const double lo = -2.0 * r_bar;
  const double hi = 2.0 * r_bar;
  const double h = (hi - lo) / (kScanPoints - 1);
  int best = 0;
  std::vector<double> scan(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    scan[i] = fidelity_at(lo + h * i);
    if (scan[i] > scan[best]) best = i;
  }
  out.fidelity = scan[best];
  out.optimal_bias = lo + h * best;
  out.converged = best > 0 && best + 1 < kScanPoints;
  if (out.converged) {
    // A tie with a neighbour (a maximum halfway between two grid points) does
    // not bracket strictly; the midpoint towards the better neighbour does.
    const int side = scan[best + 1] > scan[best - 1] ? 1 : -1;
    double guess = out.optimal_bias;
    if (scan[best + side] >= scan[best]) guess += 0.5 * h * side;
    const detail::ScalarMinimum m = detail::golden_section(
        [&](double d) { return -fidelity_at(d); }, lo + h * (best - 1), guess, lo + h * (best + 1), kBiasTol);
    if (m.converged && -m.f >= out.fidelity) {
      out.fidelity = -m.f;
      out.optimal_bias = m.x;
    } else if (!m.converged) {
      out.converged = false;
    }
  }
  out.e_t = entanglement_of_teleportation(out.fidelity);
  return out;
}

double entanglement_of_teleportation(double f_opt) {
  if (!std::isfinite(f_opt) || f_opt <= 0.0 || f_opt > 1.0 + 1e-12) {
    throw Error(ErrorKind::DomainError, "fidelity must lie in (0, 1]");
  }
  return std::clamp((f_opt - kClassicalFidelity) / (1.0 - kClassicalFidelity), 0.0, 1.0);
}

double localizable_eof_from_et(double e_t) {
  if (!std::isfinite(e_t) || e_t < 0.0 || e_t >= 1.0) {
    throw Error(ErrorKind::DomainError, "entanglement of teleportation must lie in [0, 1)");
  }
  return eof_function((1.0 - e_t) / (1.0 + e_t));
}

double tripartite_contangle_from_et(double e_t) {
  if (!std::isfinite(e_t) || e_t < 0.0 || e_t > kMaxTripartiteEt) {
    throw Error(ErrorKind::DomainError, "entanglement of teleportation must lie in [0, 1 - 1e-9]");
  }
  const double e = e_t;
  const double q = e * (e + 4.0) + 1.0;
  // The first log argument is 0/0 at e = 1. Rationalizing the numerator
  // cancels one factor (1 - e) exactly:
  //   (2 sqrt2 e - (e+1) sqrt(e^2+1)) / ((e-1) sqrt q)
  //     = (1 - e) sqrt q / (2 sqrt2 e + (e+1) sqrt(e^2+1)).
  const double arg = (1.0 - e) * std::sqrt(q) / (2.0 * std::sqrt(2.0) * e + (e + 1.0) * std::sqrt(e * e + 1.0));
  const double l1 = std::log(arg);
  const double l2 = std::log((e * e + 1.0) / q);
  return l1 * l1 - 0.5 * l2 * l2;
}

}  // namespace gaussent
