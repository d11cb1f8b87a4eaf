#include "gaussent/sharing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <unsupported/Eigen/AutoDiff>

#include "gaussent/multimode.hpp"
#include "minimize.hpp"

namespace gaussent {

namespace {

constexpr double kPenalty = 1e30;
constexpr double kRestartSpread = 1e-4;
constexpr double kMaxParam = 30.0;

ModeSet other_modes(std::size_t n, Mode focus) {
  ModeSet out;
  for (Mode m = 0; m < n; ++m) {
    if (m != focus) out.push_back(m);
  }
  return out;
}

void check_focus(const CovarianceMatrix& cm, Mode focus) {
  if (focus >= cm.n_modes()) {
    std::ostringstream os;
    os << "focus mode " << focus << " out of range for " << cm.n_modes() << " modes";
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
  if (cm.n_modes() < 2) throw Error(ErrorKind::DimensionMismatch, "contangle needs at least two modes");
}

// Pure k-mode covariance matrix from k(k+1) real parameters:
//   xx = Y^-1, xp = Y^-1 X, pp = Y + X Y^-1 X,
// with Y = L L^T (L lower triangular, log-diagonal) and X symmetric.
// The zero vector gives the vacuum.
template <class Scalar, class Params>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pure_from_params(const Params& th, Eigen::Index k) {
  using std::exp;
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  M l = M::Zero(k, k);
  M x = M::Zero(k, k);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) l(i, j) = i == j ? Scalar(exp(th[p++])) : Scalar(th[p++]);
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) x(i, j) = x(j, i) = th[p++];
  }
  const M y = l * l.transpose();
  const M l_inv = l.template triangularView<Eigen::Lower>().solve(M::Identity(k, k));
  const M y_inv = l_inv.transpose() * l_inv;
  const M xp = y_inv * x;
  const M pp = y + x * xp;
  M out(2 * k, 2 * k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      out(2 * a, 2 * b) = y_inv(a, b);
      out(2 * a, 2 * b + 1) = xp(a, b);
      out(2 * a + 1, 2 * b) = xp(b, a);
      out(2 * a + 1, 2 * b + 1) = pp(a, b);
    }
  }
  return out;
}

// Roof over pure states sigma_p <= sigma. In the Williamson frame
// sigma = S D S^T, and any pure P <= D must equal the vacuum on modes with
// nu = 1, so only the mixed modes carry free parameters and the feasible set
// has an interior there (P' = I is strictly inside).
//
// The contangle is increasing in det of the focus block, so the search
// minimizes log det(focus) - t log det(D - P) along a decreasing t.
class RoofProblem {
 public:
  RoofProblem(const CovarianceMatrix& cm, Mode focus) {
    const WilliamsonDecomposition w = williamson(cm);
    const Matrix& s = w.s.matrix();
    std::vector<Eigen::Index> mixed_cols;
    std::vector<Eigen::Index> pure_cols;
    std::vector<double> nu;
    for (std::size_t k = 0; k < w.nu.size(); ++k) {
      auto& dst = w.nu[k] - 1.0 > kPurityTol ? mixed_cols : pure_cols;
      dst.push_back(static_cast<Eigen::Index>(2 * k));
      dst.push_back(static_cast<Eigen::Index>(2 * k + 1));
      if (w.nu[k] - 1.0 > kPurityTol) nu.push_back(w.nu[k]);
    }
    k_ = static_cast<Eigen::Index>(nu.size());
    const std::vector<Eigen::Index> rows{static_cast<Eigen::Index>(2 * focus),
                                         static_cast<Eigen::Index>(2 * focus + 1)};
    s_focus_mixed_ = s(rows, mixed_cols);
    const Matrix s_focus_pure = s(rows, pure_cols);
    fixed_ = s_focus_pure * s_focus_pure.transpose();
    d_ = Vector(2 * k_);
    for (Eigen::Index i = 0; i < k_; ++i) d_[2 * i] = d_[2 * i + 1] = nu[static_cast<std::size_t>(i)];
  }

  Eigen::Index n_params() const { return k_ * (k_ + 1); }

  bool feasible(const Vector& th) const { return gap_eigenvalues(pure_from_params<double>(th, k_)).minCoeff() > 0.0; }

  double contangle(const Vector& th) const {
    const double b = std::sqrt(std::max(1.0, focus_block(pure_from_params<double>(th, k_)).determinant()));
    return std::acosh(b) * std::acosh(b);
  }

  // Barrier objective and its gradient; a penalty outside the interior.
  double barrier(const Vector& th, double t, Vector& grad) const {
    grad.setZero(th.size());
    if (th.size() > 0 && th.cwiseAbs().maxCoeff() > kMaxParam) return kPenalty;
    using Dual = Eigen::AutoDiffScalar<Vector>;
    Eigen::Matrix<Dual, Eigen::Dynamic, 1> seeded(th.size());
    for (Eigen::Index i = 0; i < th.size(); ++i) seeded[i] = Dual(th[i], th.size(), i);
    const auto pd = pure_from_params<Dual>(seeded, k_);
    Matrix p(pd.rows(), pd.cols());
    for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = pd.data()[i].value();
    p = 0.5 * (p + p.transpose());

    const Matrix gap = Matrix(d_.asDiagonal()) - p;
    Eigen::LLT<Matrix> gap_llt(gap);
    if (gap_llt.info() != Eigen::Success || gap_eigenvalues(p).minCoeff() <= 0.0) return kPenalty;
    const Matrix2 focus = focus_block(p);
    const double det = focus.determinant();
    if (!(det > 0.0)) return kPenalty;

    double log_det_gap = 0.0;
    for (Eigen::Index i = 0; i < gap.rows(); ++i) log_det_gap += 2.0 * std::log(gap_llt.matrixL()(i, i));
    // d log det(focus) = tr(A^T F^-1 A dP); d log det(gap) = -tr(gap^-1 dP).
    const Matrix weight = s_focus_mixed_.transpose() * focus.inverse() * s_focus_mixed_ +
                          t * gap_llt.solve(Matrix::Identity(gap.rows(), gap.cols()));
    for (Eigen::Index i = 0; i < pd.size(); ++i) grad += weight.data()[i] * pd.data()[i].derivatives();
    return std::log(det) - t * log_det_gap;
  }

 private:
  Vector gap_eigenvalues(const Matrix& p) const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(d_.asDiagonal()) - p, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  Matrix2 focus_block(const Matrix& p) const { return fixed_ + s_focus_mixed_ * p * s_focus_mixed_.transpose(); }

  Eigen::Index k_ = 0;
  Matrix s_focus_mixed_;
  Matrix2 fixed_;
  Vector d_;
};

struct RoofOutcome {
  double value = 0.0;
  bool converged = true;
};

RoofOutcome solve_roof(const RoofProblem& problem, const RoofOptions& options) {
  const Eigen::Index dim = problem.n_params();
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 0.5);

  std::vector<double> finals;
  const int restarts = std::max(1, options.restarts);
  for (int r = 0; r < restarts; ++r) {
    Vector x = Vector::Zero(dim);
    if (r > 0) {
      for (Eigen::Index i = 0; i < dim; ++i) x[i] = normal(rng);
      while (!problem.feasible(x)) x *= 0.5;
    }
    for (double t = 1e-1; t >= 1e-13; t *= 0.1) {
      auto f = [&](const Vector& th, Vector& g) { return problem.barrier(th, t, g); };
      x = detail::bfgs(f, x).x;
    }
    finals.push_back(problem.contangle(x));
  }
  const auto [lo, hi] = std::minmax_element(finals.begin(), finals.end());
  return RoofOutcome{*lo, *hi - *lo <= kRestartSpread};
}

ContangleValue numeric_roof(const CovarianceMatrix& cm, Mode focus, const RoofOptions& options) {
  const ModeSet rest = other_modes(cm.n_modes(), focus);
  if (log_negativity(cm, Bipartition{{focus}, rest}) <= 0.0) {
    return ContangleValue{0.0, ContangleMethod::GaussianRoofNumeric, true};
  }
  // A symmetric remainder can be localized onto one mode by passive
  // operations on its side; the roof is invariant under them and blind to
  // the uncorrelated leftover modes.
  if (rest.size() > 1) {
    ModeSet order{focus};
    order.insert(order.end(), rest.begin(), rest.end());
    const CovarianceMatrix permuted = permute_modes(cm, order);
    try {
      const Localization loc = unitary_localization(permuted, 1);
      return contangle_1_vs_rest(loc.eq_two_mode, 0, options);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotBisymmetric) throw;
    }
  }
  const RoofOutcome out = solve_roof(RoofProblem(cm, focus), options);
  return ContangleValue{out.value, ContangleMethod::GaussianRoofNumeric, out.converged};
}

CovarianceMatrix pair_state(const CovarianceMatrix& cm, Mode a, Mode b) {
  CovarianceMatrix reduced = partial_trace(cm, ModeSet{a, b});
  return a < b ? reduced : permute_modes(reduced, ModeSet{1, 0});
}

}  // namespace

const char* to_string(ContangleMethod m) noexcept {
  switch (m) {
    case ContangleMethod::AnalyticPure: return "analytic-pure";
    case ContangleMethod::GaussianRoofNumeric: return "gaussian-roof-numeric";
  }
  return "unknown";
}

bool is_pure(const CovarianceMatrix& cm) {
  const SymplecticSpectrum nu = symplectic_spectrum(cm);
  return std::all_of(nu.values.begin(), nu.values.end(),
                     [](double v) { return std::abs(v - 1.0) <= kPurityTol; });
}

double contangle_from_mixedness(double b) {
  if (!std::isfinite(b) || b < 1.0 - 1e-12) {
    throw Error(ErrorKind::DomainError, "local mixedness must be >= 1");
  }
  // log(b - sqrt(b^2 - 1)) = -acosh(b); the latter avoids cancellation.
  const double a = std::acosh(std::max(1.0, b));
  return a * a;
}

ContangleValue contangle_pure_1_vs_rest(const CovarianceMatrix& cm, Mode i) {
  check_focus(cm, i);
  require_physical(cm);
  if (!is_pure(cm)) throw Error(ErrorKind::NotPure, "state has a symplectic eigenvalue different from 1");
  const double b = std::sqrt(cm.block(i, i).determinant());
  return ContangleValue{contangle_from_mixedness(std::max(1.0, b)), ContangleMethod::AnalyticPure, true};
}

ContangleValue contangle_1_vs_rest(const CovarianceMatrix& cm, Mode i, const RoofOptions& options) {
  check_focus(cm, i);
  require_physical(cm);
  if (is_pure(cm)) return contangle_pure_1_vs_rest(cm, i);
  return numeric_roof(cm, i, options);
}

ContangleValue gaussian_contangle_two_mode(const CovarianceMatrix& cm, const RoofOptions& options) {
  if (cm.n_modes() != 2) throw Error(ErrorKind::DimensionMismatch, "expected a two-mode covariance matrix");
  return contangle_1_vs_rest(cm, 0, options);
}

MonogamyReport monogamy_check(const CovarianceMatrix& cm, Mode focus, const RoofOptions& options) {
  if (cm.n_modes() < 3) throw Error(ErrorKind::DimensionMismatch, "monogamy needs at least three modes");
  check_focus(cm, focus);
  MonogamyReport report;
  report.focus_mode = focus;
  report.one_vs_rest = contangle_1_vs_rest(cm, focus, options);
  report.partners = other_modes(cm.n_modes(), focus);
  report.residual = report.one_vs_rest.value;
  for (Mode l : report.partners) {
    report.pairwise.push_back(gaussian_contangle_two_mode(pair_state(cm, focus, l), options));
    report.residual -= report.pairwise.back().value;
  }
  return report;
}

ResidualContangle residual_contangle(const CovarianceMatrix& cm, const RoofOptions& options) {
  if (cm.n_modes() != 3) throw Error(ErrorKind::DimensionMismatch, "expected a three-mode covariance matrix");
  require_physical(cm);
  // Each pair enters two foci; evaluate it once, in a fixed mode order.
  ContangleValue pairs[3][3];
  for (Mode a = 0; a < 3; ++a) {
    for (Mode b = a + 1; b < 3; ++b) {
      pairs[a][b] = pairs[b][a] = gaussian_contangle_two_mode(partial_trace(cm, ModeSet{a, b}), options);
    }
  }
  ResidualContangle out;
  out.minimum = std::numeric_limits<double>::infinity();
  for (Mode focus = 0; focus < 3; ++focus) {
    MonogamyReport report;
    report.focus_mode = focus;
    report.one_vs_rest = contangle_1_vs_rest(cm, focus, options);
    report.partners = other_modes(3, focus);
    report.residual = report.one_vs_rest.value;
    for (Mode l : report.partners) {
      report.pairwise.push_back(pairs[focus][l]);
      report.residual -= pairs[focus][l].value;
    }
    out.minimum = std::min(out.minimum, report.residual);
    out.per_focus.push_back(std::move(report));
  }
  return out;
}

Promiscuity promiscuity_report(double b, const RoofOptions& options) {
  if (!std::isfinite(b) || b < 1.0) throw Error(ErrorKind::DomainError, "local mixedness must be >= 1");
  if (b == 1.0) return {};
  const double r = ghz_squeezing_for_mixedness(3, b);
  const CovarianceMatrix cm = ghz_type_state(GhzTypeSpec{3, r, 1.0});
  const ResidualContangle res = residual_contangle(cm, options);
  return Promiscuity{res.per_focus.front().pairwise.front().value, res.minimum};
}

}  // namespace gaussent
