#include <cmath>

#include "doctest.h"
#include "gaussent/twomode.hpp"
#include "support/testkit.hpp"

using namespace gaussent;
using doctest::Approx;

namespace {

Matrix standard_form_matrix(double a, double b, double cp, double cm) {
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << a, a, b, b;
  m(0, 2) = m(2, 0) = cp;
  m(1, 3) = m(3, 1) = cm;
  return m;
}

double nu_minus_tilde_oracle(const Matrix& s) { return testkit::spectrum_oracle(testkit::flip_momenta(s, {1}))[0]; }

// Delta range at fixed purities, written with a = 1/mu1, b = 1/mu2. The upper
// end also keeps [(a + b)^2 - Delta]^2 >= 4/mu^2, i.e. c+ and c- real.
std::pair<double, double> delta_bounds(double mu1, double mu2, double mu) {
  const double a = 1.0 / mu1, b = 1.0 / mu2;
  return {2.0 / mu + (a - b) * (a - b), std::min(1.0 + 1.0 / (mu * mu), (a + b) * (a + b) - 2.0 / mu)};
}

double upper_purity(double mu1, double mu2) { return mu1 * mu2 / (mu1 * mu2 + std::abs(mu1 - mu2)); }

template <class F>
ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no gaussent::Error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("invariants_from_cm") {
  const auto vac = invariants_from_cm(CovarianceMatrix::vacuum(2));
  CHECK(vac.mu1 == Approx(1.0));
  CHECK(vac.mu2 == Approx(1.0));
  CHECK(vac.mu == Approx(1.0));
  CHECK(vac.delta == Approx(2.0));

  for (double r : {0.3, 1.0}) {
    const auto inv = invariants_from_cm(two_mode_squeezed_vacuum(r));
    CHECK(inv.mu1 == Approx(1.0 / std::cosh(2 * r)).epsilon(1e-12));
    CHECK(inv.mu2 == Approx(1.0 / std::cosh(2 * r)).epsilon(1e-12));
    CHECK(inv.mu == Approx(1.0).epsilon(1e-9));
    CHECK(inv.delta == Approx(2.0).epsilon(1e-9));
  }

  const auto sf = invariants_from_cm(CovarianceMatrix(standard_form_matrix(2, 2, 1, -1)));
  CHECK(sf.mu1 == Approx(0.5));
  CHECK(sf.mu2 == Approx(0.5));
  CHECK(sf.mu == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(sf.delta == Approx(6.0).epsilon(1e-12));

  CHECK(error_kind_of([] { invariants_from_cm(CovarianceMatrix::vacuum(3)); }) == ErrorKind::DimensionMismatch);
  CHECK(error_kind_of([] { invariants_from_cm(CovarianceMatrix(standard_form_matrix(1, 1, 0.1, 0.1))); }) ==
        ErrorKind::Unphysical);
}

TEST_CASE("standard_form_from_invariants") {
  SUBCASE("vacuum") {
    const auto sf = standard_form_from_invariants({1, 1, 1, 2});
    CHECK(sf.a == Approx(1.0));
    CHECK(sf.b == Approx(1.0));
    CHECK(sf.c_plus == Approx(0.0));
    CHECK(sf.c_minus == Approx(0.0));
  }
  SUBCASE("symmetric squeezed thermal state has a degenerate spectrum") {
    const auto sf = standard_form_from_invariants({0.8, 0.8, 0.9, 2.0 / 0.9});
    const auto nu = testkit::spectrum_oracle(cm_from_standard_form(sf).matrix());
    CHECK(nu[0] == Approx(1.0 / std::sqrt(0.9)).epsilon(1e-7));
    CHECK(nu[1] == Approx(1.0 / std::sqrt(0.9)).epsilon(1e-7));
  }
  SUBCASE("pure symmetric state") {
    const double mu1 = 1.0 / std::cosh(2.0);
    const auto sf = standard_form_from_invariants({mu1, mu1, 1, 2});
    CHECK(sf.a == Approx(std::cosh(2.0)).epsilon(1e-10));
    CHECK(sf.c_plus == Approx(std::sqrt(sf.a * sf.a - 1.0)).epsilon(1e-7));
    CHECK(sf.c_minus == Approx(-std::sqrt(sf.a * sf.a - 1.0)).epsilon(1e-7));
    CHECK(sf.c_plus == Approx(std::sinh(2.0)).epsilon(1e-7));
  }
  SUBCASE("violations name the failing bound") {
    CHECK(error_kind_of([] { standard_form_from_invariants({0.5, 0.5, 0.2, 8.0}); }) == ErrorKind::ConstraintViolation);
    CHECK(error_kind_of([] { standard_form_from_invariants({0.5, 0.5, 0.45, 1.0}); }) ==
          ErrorKind::ConstraintViolation);
    CHECK(error_kind_of([] { standard_form_from_invariants({0.5, 0.5, 0.45, 20.0}); }) ==
          ErrorKind::ConstraintViolation);
    try {
      standard_form_from_invariants({0.5, 0.5, 0.45, 20.0});
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("Delta") != std::string::npos);
    }
  }
}

TEST_CASE("cm_from_standard_form") {
  CHECK(cm_from_standard_form({1, 1, 0, 0}).matrix() == Matrix::Identity(4, 4));
  const double ch = std::cosh(1.4), sh = std::sinh(1.4);
  CHECK(testkit::max_abs(cm_from_standard_form({ch, ch, sh, -sh}).matrix() - two_mode_squeezed_vacuum(0.7).matrix()) <
        1e-12);
  CHECK(error_kind_of([] { cm_from_standard_form({1, 1, 0.1, 0.1}); }) == ErrorKind::Unphysical);
}

TEST_CASE("standard_form_from_cm") {
  const Matrix sf = standard_form_matrix(1.8, 1.3, 0.9, -0.7);
  const auto back = standard_form_from_cm(CovarianceMatrix(sf));
  CHECK(back.a == Approx(1.8).epsilon(1e-9));
  CHECK(back.b == Approx(1.3).epsilon(1e-9));
  CHECK(back.c_plus == Approx(0.9).epsilon(1e-7));
  CHECK(back.c_minus == Approx(-0.7).epsilon(1e-7));

  testkit::Rng rng(21);
  const double r = 0.8;
  const auto rotated = apply_symplectic(two_mode_squeezed_vacuum(r), testkit::random_local(rng, 2, 0.0));
  const auto tm = standard_form_from_cm(rotated);
  CHECK(tm.a == Approx(std::cosh(2 * r)).epsilon(1e-9));
  CHECK(tm.c_plus == Approx(std::sinh(2 * r)).epsilon(1e-6));
  CHECK(tm.c_minus == Approx(-std::sinh(2 * r)).epsilon(1e-6));

  const auto prod = standard_form_from_cm(CovarianceMatrix(standard_form_matrix(2.5, 1.5, 0, 0)));
  CHECK(prod.a == Approx(2.5));
  CHECK(prod.b == Approx(1.5));
  // c+- enter the invariants quadratically, so they are only recovered to
  // about the square root of machine precision near zero.
  CHECK(std::abs(prod.c_plus) < 1e-7);
  CHECK(std::abs(prod.c_minus) < 1e-7);

  // Separable correlated state keeps Det gamma >= 0.
  const auto sep = standard_form_from_cm(CovarianceMatrix(standard_form_matrix(2, 2, 0.5, 0.3)));
  CHECK(sep.c_plus == Approx(0.5).epsilon(1e-7));
  CHECK(sep.c_minus == Approx(0.3).epsilon(1e-7));
}

TEST_CASE("ppt_eigenvalues") {
  const auto vac = ppt_eigenvalues({1, 1, 1, 2});
  CHECK(vac.delta_tilde == Approx(2.0));
  CHECK(vac.nu_tilde_minus == Approx(1.0));
  CHECK(vac.nu_tilde_plus == Approx(1.0));

  for (double r : {0.3, 1.0, 2.0}) {
    const auto cm = two_mode_squeezed_vacuum(r);
    const auto p = ppt_eigenvalues(invariants_from_cm(cm));
    CHECK(p.nu_tilde_minus == Approx(nu_minus_tilde_oracle(cm.matrix())).epsilon(1e-9));
    CHECK(p.nu_tilde_minus == Approx(std::exp(-2 * r)).epsilon(1e-9));
  }

  // Symmetric state on the upper Delta bound: the unflipped spectrum touches 1.
  const double mu1 = 0.8, mu = 0.9;
  const auto sf = glems(mu1, mu1, mu);
  CHECK(testkit::spectrum_oracle(cm_from_standard_form(sf).matrix())[0] == Approx(1.0).epsilon(1e-7));

  CHECK(error_kind_of([] { ppt_eigenvalues({0.5, 0.5, 1.0, 0.1}); }) == ErrorKind::NegativeRadicand);
}

TEST_CASE("log_negativity_two_mode") {
  CHECK(log_negativity_two_mode({1, 1, 1, 2}) == 0.0);
  CHECK(log_negativity_two_mode(invariants_from_cm(two_mode_squeezed_vacuum(1.0))) == Approx(2.0).epsilon(1e-9));
  const auto g = gmems(0.5, 0.5, 0.45);
  const double e = log_negativity_two_mode(invariants_from_cm(cm_from_standard_form(g)));
  CHECK(e > 0.0);
  CHECK(e == Approx(-std::log(nu_minus_tilde_oracle(cm_from_standard_form(g).matrix()))).epsilon(1e-9));
}

TEST_CASE("classify_by_purities") {
  const auto t = purity_thresholds(0.5, 0.5);
  CHECK(t.separable == Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(t.coexistence == Approx(0.25 / std::sqrt(0.4375)).epsilon(1e-14));
  CHECK(classify_by_purities(0.5, 0.5, 0.30) == EntanglementClass::Separable);
  CHECK(classify_by_purities(0.5, 0.5, 0.35) == EntanglementClass::Coexistence);
  CHECK(classify_by_purities(0.5, 0.5, 0.45) == EntanglementClass::Entangled);
  // Closed upper ends: threshold points belong to the lower band.
  CHECK(classify_by_purities(0.5, 0.5, t.separable) == EntanglementClass::Separable);
  CHECK(classify_by_purities(0.5, 0.5, t.coexistence) == EntanglementClass::Coexistence);
  CHECK(error_kind_of([] { classify_by_purities(0.5, 0.5, 0.2); }) == ErrorKind::UnphysicalPurities);
  CHECK(error_kind_of([] { classify_by_purities(0.5, 0.8, 0.7); }) == ErrorKind::UnphysicalPurities);
  CHECK(error_kind_of([] { classify_by_purities(0.0, 0.5, 0.1); }) == ErrorKind::UnphysicalPurities);
  CHECK(std::string(to_string(EntanglementClass::Coexistence)) == "Coexistence");
}

TEST_CASE("gmems and glems") {
  const auto g = cm_from_standard_form(gmems(0.8, 0.8, 0.9));
  const auto nu = testkit::spectrum_oracle(g.matrix());
  CHECK(nu[0] == Approx(1.0 / std::sqrt(0.9)).epsilon(1e-7));
  CHECK(nu[1] == Approx(1.0 / std::sqrt(0.9)).epsilon(1e-7));
  CHECK(testkit::spectrum_oracle(cm_from_standard_form(glems(0.8, 0.8, 0.9)).matrix())[0] == Approx(1.0).epsilon(1e-7));

  const auto pg = gmems(0.6, 0.6, 1.0);
  const auto pl = glems(0.6, 0.6, 1.0);
  CHECK(pg.c_plus == Approx(pl.c_plus).epsilon(1e-7));
  CHECK(pg.c_minus == Approx(pl.c_minus).epsilon(1e-7));
  CHECK(purity(cm_from_standard_form(pg)) == Approx(1.0).epsilon(1e-9));

  // Nonsymmetric GLEMS outside the separable band has a unit symplectic eigenvalue.
  REQUIRE(classify_by_purities(0.7, 0.4, 0.42) != EntanglementClass::Separable);
  CHECK(testkit::spectrum_oracle(cm_from_standard_form(glems(0.7, 0.4, 0.42)).matrix())[0] ==
        Approx(1.0).epsilon(1e-7));
  CHECK(error_kind_of([] { gmems(0.5, 0.5, 0.2); }) == ErrorKind::ConstraintViolation);

  // In the separable band the least entangled state is bounded by the reality
  // of c+-, not by partial minimum uncertainty.
  const auto sep = cm_from_standard_form(glems(0.7, 0.4, 0.29));
  CHECK(testkit::spectrum_oracle(sep.matrix())[0] > 1.0);
  CHECK(invariants_from_cm(sep).delta == Approx(delta_bounds(0.7, 0.4, 0.29).second).epsilon(1e-9));
}

TEST_CASE("extremal_entanglement") {
  const auto pure = extremal_entanglement(0.4, 0.4, 1.0);
  CHECK(pure.e_max == Approx(pure.e_min).epsilon(1e-7));
  CHECK(pure.rel_error == Approx(0.0).epsilon(1e-6));

  const auto coex = extremal_entanglement(0.5, 0.5, 0.35);
  CHECK(coex.e_min == 0.0);
  CHECK(coex.e_max > 0.0);
  CHECK(coex.rel_error == 1.0);

  const auto sep = extremal_entanglement(0.5, 0.5, 0.3);
  CHECK(sep.e_max == 0.0);
  CHECK(sep.rel_error == 0.0);

  // Symmetric, strongly entangled: error under five percent.
  const auto strong = extremal_entanglement(0.2, 0.2, 0.6);
  CHECK(strong.e_avg >= 1.0);
  CHECK(strong.rel_error < 0.05);
}

TEST_CASE("eof") {
  CHECK(eof_symmetric(CovarianceMatrix::vacuum(2)) == 0.0);
  for (double r : {0.3, 1.0, 2.0}) {
    const double c2 = std::cosh(r) * std::cosh(r), s2 = std::sinh(r) * std::sinh(r);
    CHECK(eof_symmetric(two_mode_squeezed_vacuum(r)) == Approx(c2 * std::log(c2) - s2 * std::log(s2)).epsilon(1e-9));
  }
  CHECK(eof_function(0.5) == Approx(1.125 * std::log(1.125) - 0.125 * std::log(0.125)).epsilon(1e-14));
  CHECK(eof_function(1.0) == 0.0);
  CHECK(error_kind_of([] { eof_symmetric(CovarianceMatrix(standard_form_matrix(2, 1.5, 0.5, -0.5))); }) ==
        ErrorKind::NotSymmetric);
  // Separable symmetric state.
  CHECK(eof_symmetric(CovarianceMatrix(standard_form_matrix(2, 2, 0.5, 0.3))) == 0.0);
}

// Properties over the physical region.

namespace {

TwoModeInvariants sample_invariants(testkit::Rng& rng) {
  const double mu1 = rng.uniform(0.05, 1.0);
  const double mu2 = rng.uniform(0.05, 1.0);
  const double mu = rng.uniform(mu1 * mu2, upper_purity(mu1, mu2));
  const auto [lo, hi] = delta_bounds(mu1, mu2, mu);
  return {mu1, mu2, mu, rng.uniform(lo, hi)};
}

}  // namespace

TEST_CASE("property: invariants round trip through the standard form") {
  testkit::Rng rng(201);
  for (int trial = 0; trial < 400; ++trial) {
    const auto inv = sample_invariants(rng);
    const auto back = invariants_from_cm(cm_from_standard_form(standard_form_from_invariants(inv)));
    CHECK(back.mu1 == Approx(inv.mu1).epsilon(1e-7));
    CHECK(back.mu2 == Approx(inv.mu2).epsilon(1e-7));
    CHECK(back.mu == Approx(inv.mu).epsilon(1e-7));
    CHECK(back.delta == Approx(inv.delta).epsilon(1e-7));
  }
}

TEST_CASE("property: standard form of a random state preserves its log-negativity") {
  testkit::Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cm = testkit::random_mixed(rng, 2, 1.2, 2.0);
    const auto sf = standard_form_from_cm(cm);
    const double e = log_negativity(cm, Bipartition::split_after(1, 2));
    CHECK(log_negativity(cm_from_standard_form(sf), Bipartition::split_after(1, 2)) == Approx(e).epsilon(1e-7));
    CHECK(log_negativity_two_mode(invariants_from_cm(cm)) == Approx(e).epsilon(1e-8));
  }
}

TEST_CASE("property: nu-tilde-minus is nondecreasing in Delta") {
  testkit::Rng rng(203);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inv = sample_invariants(rng);
    const auto [lo, hi] = delta_bounds(inv.mu1, inv.mu2, inv.mu);
    double previous = 0.0;
    for (int k = 0; k <= 20; ++k) {
      const double d = lo + (hi - lo) * k / 20.0;
      const double nu = ppt_eigenvalues({inv.mu1, inv.mu2, inv.mu, d}).nu_tilde_minus;
      CHECK(nu >= previous - 1e-12);
      previous = nu;
    }
  }
}

TEST_CASE("property: classification agrees with the PPT verdict") {
  testkit::Rng rng(204);
  int coexistence_entangled = 0, coexistence_separable = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const double mu1 = rng.uniform(0.1, 1.0);
    const double mu2 = rng.uniform(0.1, 1.0);
    const double mu = rng.uniform(mu1 * mu2, upper_purity(mu1, mu2));
    const auto cls = classify_by_purities(mu1, mu2, mu);
    const auto [lo, hi] = delta_bounds(mu1, mu2, mu);
    for (int k = 0; k <= 10; ++k) {
      const double e = log_negativity_two_mode({mu1, mu2, mu, lo + (hi - lo) * k / 10.0});
      if (cls == EntanglementClass::Separable) CHECK(e <= 1e-9);
      if (cls == EntanglementClass::Entangled) CHECK(e > 0.0);
      if (cls == EntanglementClass::Coexistence) (e > 0.0 ? coexistence_entangled : coexistence_separable)++;
    }
  }
  CHECK(coexistence_entangled > 0);
  CHECK(coexistence_separable > 0);
}

TEST_CASE("delta_range matches the reality conditions") {
  testkit::Rng rng(207);
  for (int trial = 0; trial < 100; ++trial) {
    const double mu1 = rng.uniform(0.05, 1.0);
    const double mu2 = rng.uniform(0.05, 1.0);
    const double mu = rng.uniform(mu1 * mu2, upper_purity(mu1, mu2));
    const auto r = delta_range(mu1, mu2, mu);
    const auto [lo, hi] = delta_bounds(mu1, mu2, mu);
    CHECK(r.lower == Approx(lo).epsilon(1e-12));
    CHECK(r.upper == Approx(hi).epsilon(1e-12));
    CHECK(error_kind_of([&] { check_invariants({mu1, mu2, mu, hi * (1 + 1e-4) + 1e-4}); }) ==
          ErrorKind::ConstraintViolation);
  }
}

TEST_CASE("property: extremal states coincide on the upper purity boundary") {
  testkit::Rng rng(205);
  for (int trial = 0; trial < 100; ++trial) {
    const double mu1 = rng.uniform(0.1, 1.0);
    const double mu2 = rng.uniform(0.1, 1.0);
    const auto ext = extremal_entanglement(mu1, mu2, upper_purity(mu1, mu2));
    CHECK(ext.e_max == Approx(ext.e_min).epsilon(1e-6));
  }
}

TEST_CASE("property: average sits midway between the bounds") {
  testkit::Rng rng(206);
  for (int trial = 0; trial < 100; ++trial) {
    const double mu1 = rng.uniform(0.1, 1.0);
    const double mu2 = rng.uniform(0.1, 1.0);
    const auto ext = extremal_entanglement(mu1, mu2, rng.uniform(mu1 * mu2, upper_purity(mu1, mu2)));
    CHECK(ext.e_min <= ext.e_max);
    CHECK(ext.e_avg - ext.e_min == Approx(ext.e_max - ext.e_avg).epsilon(1e-12));
  }
}
