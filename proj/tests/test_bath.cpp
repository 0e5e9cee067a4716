#include <doctest.h>

#include <cmath>

#include "heom/bath.hpp"
#include "heom/oracles.hpp"

using namespace heom;

namespace {

DenseMatrix lower2() {
  DenseMatrix d(2, 2);
  d << 0, 1, 0, 0;
  return d;
}

DenseMatrix sigma_z() {
  DenseMatrix s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

double fermi_recon_error(const BathSpec& bath, double Gamma, double W, double mu,
                         double kT, int nu, double tau_max, int points) {
  const double c0 =
      std::abs(oracles::fermion_correlation_quadrature(Gamma, W, mu, kT, nu, 0.0));
  double worst = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double tau = tau_max * i / points;
    const cx ref = oracles::fermion_correlation_quadrature(Gamma, W, mu, kT, nu, tau);
    worst = std::max(worst, std::abs(bath.correlation(tau, nu) - ref) / c0);
  }
  return worst;
}

// The Drude-Lorentz correlation integral is log-divergent at tau = 0, so the
// grid starts one step in.
double boson_recon_error(const BathSpec& bath, double Delta, double W, double kT,
                         double tau_max, int points) {
  const double c0 = std::abs(
      oracles::boson_correlation_quadrature(Delta, W, kT, tau_max / points));
  double worst = 0.0;
  for (int i = 1; i <= points; ++i) {
    const double tau = tau_max * i / points;
    const cx ref = oracles::boson_correlation_quadrature(Delta, W, kT, tau);
    worst = std::max(worst, std::abs(bath.correlation(tau) - ref) / c0);
  }
  return worst;
}

}  // namespace

TEST_CASE("lorentzian pade: pole term and parameter errors") {
  const auto bath = BathSpec::lorentzian_fermion(lower2(), 1.0, 10.0, 0.0, 0.5, 7);
  const auto& exps = bath.fermionic_exponents();
  REQUIRE(exps.size() == 14);
  CHECK(bath.family_size() == 7);
  // gamma_1 = W - nu*i*mu = 10 at mu = 0, both families.
  CHECK(exps[0].gamma == cx(10.0, 0.0));
  CHECK(exps[7].gamma == cx(10.0, 0.0));
  CHECK(exps[0].nu == +1);
  CHECK(exps[7].nu == -1);
  for (const auto& e : exps) CHECK(e.gamma.real() > 0.0);

  CHECK_THROWS_AS(BathSpec::lorentzian_fermion(lower2(), 1, -1, 0, 0.5, 7),
                  ParameterError);
  CHECK_THROWS_AS(BathSpec::lorentzian_fermion(lower2(), 1, 10, 0, 0.0, 7),
                  ParameterError);
  CHECK_THROWS_AS(BathSpec::lorentzian_fermion(lower2(), 1, 10, 0, 0.5, 0),
                  ParameterError);
}

TEST_CASE("lorentzian pade: zero coupling yields zero coefficients") {
  const auto bath = BathSpec::lorentzian_fermion(lower2(), 0.0, 10.0, 1.0, 0.5, 4);
  for (const auto& e : bath.fermionic_exponents()) CHECK(std::abs(e.eta) == 0.0);
}

TEST_CASE("lorentzian pade: N=1 emits only the pole term with n = 1/2") {
  const auto bath = BathSpec::lorentzian_fermion(lower2(), 2.0, 5.0, 0.3, 0.5, 1);
  const auto& exps = bath.fermionic_exponents();
  REQUIRE(exps.size() == 2);
  // Empty sum convention: eta_1 = Gamma*W/2 * 1/2.
  CHECK(exps[0].eta == cx(2.0 * 5.0 / 4.0, 0.0));
  CHECK(exps[0].gamma == cx(5.0, -0.3));
  CHECK(exps[1].gamma == cx(5.0, 0.3));
}

TEST_CASE("lorentzian pade reconstruction matches the quadrature oracle") {
  const double Gamma = 1, W = 10, kT = 0.5;
  for (double mu : {0.0, 2.0}) {
    const auto bath = BathSpec::lorentzian_fermion(lower2(), Gamma, W, mu, kT, 7);
    for (int nu : {+1, -1})
      CHECK(fermi_recon_error(bath, Gamma, W, mu, kT, nu, 10.0, 40) < 1e-4);
  }
}

TEST_CASE("pade reconstruction error is non-increasing in N (table-1 sets)") {
  SUBCASE("fermionic") {
    const double Gamma = 1, W = 10, mu = 0, kT = 0.5;
    double prev = 1e300;
    for (int N : {2, 4, 7, 10}) {
      const auto bath = BathSpec::lorentzian_fermion(lower2(), Gamma, W, mu, kT, N);
      const double err = fermi_recon_error(bath, Gamma, W, mu, kT, +1, 1.0, 20);
      CHECK(err <= prev * (1 + 1e-9));
      prev = err;
    }
    CHECK(prev < 1e-4);
  }
  SUBCASE("bosonic") {
    const double Delta = 0.01, W = 0.2, kT = 0.5;
    double prev = 1e300;
    for (int N : {2, 4, 7, 10}) {
      const auto bath = BathSpec::drude_lorentz_boson(sigma_z(), Delta, W, kT, N);
      const double err = boson_recon_error(bath, Delta, W, kT, 50.0, 20);
      CHECK(err <= prev * (1 + 1e-9));
      prev = err;
    }
    CHECK(prev < 1e-4);
  }
}

TEST_CASE("drude-lorentz pade: term structure and the cot singularity") {
  const double Delta = 0.01, W = 0.2, kT = 0.5;
  const auto bath = BathSpec::drude_lorentz_boson(sigma_z(), Delta, W, kT, 5);
  const auto& exps = bath.bosonic_exponents();
  REQUIRE(exps.size() == 6);  // split pole term + 4 distribution poles
  CHECK(exps[0].part == BosonPart::Real);
  CHECK(exps[0].chi == cx(0.2, 0.0));
  CHECK(exps[0].xi.real() ==
        doctest::Approx(Delta * W / std::tan(0.5 * W / kT)).epsilon(1e-12));
  CHECK(exps[1].part == BosonPart::Imag);
  CHECK(exps[1].xi == cx(-Delta * W, 0.0));
  CHECK(exps[1].chi == cx(0.2, 0.0));
  for (std::size_t l = 2; l < exps.size(); ++l) {
    CHECK(exps[l].part == BosonPart::Real);
    CHECK(exps[l].chi.imag() == 0.0);
    CHECK(exps[l].xi.imag() == 0.0);
  }

  // W/(2 kT) at a pole of cot.
  CHECK_THROWS_AS(
      BathSpec::drude_lorentz_boson(sigma_z(), 0.01, 2.0 * M_PI * 0.5, 0.5, 5),
      ParameterError);
  // Zero coupling.
  const auto zero = BathSpec::drude_lorentz_boson(sigma_z(), 0.0, 0.2, 0.5, 3);
  for (const auto& e : zero.bosonic_exponents()) CHECK(std::abs(e.xi) == 0.0);
}

TEST_CASE("drude-lorentz reconstruction matches the quadrature oracle") {
  const double Delta = 0.01, W = 0.2, kT = 0.5;
  const auto bath = BathSpec::drude_lorentz_boson(sigma_z(), Delta, W, kT, 5);
  CHECK(boson_recon_error(bath, Delta, W, kT, 25.0, 25) < 1e-4);
}

TEST_CASE("matsubara reconstruction error decreases monotonically in N") {
  const double Delta = 0.01, W = 0.2, kT = 0.5;
  double prev = 1e300;
  for (int N : {2, 5, 10, 20}) {
    const auto bath = matsubara_decomposition(BathFlavor::Bosonic, sigma_z(),
                                              Delta, W, 0.0, kT, N);
    const double err = boson_recon_error(bath, Delta, W, kT, 25.0, 10);
    CHECK(err <= prev * (1 + 1e-9));
    prev = err;
  }
}

TEST_CASE("matsubara: particle-hole symmetry at mu=0 and N=1 pole term") {
  const auto bath = matsubara_decomposition(BathFlavor::Fermionic, lower2(), 1.0,
                                            10.0, 0.0, 0.5, 6);
  for (double tau : {0.0, 0.3, 1.7})
    CHECK(std::abs(bath.correlation(tau, +1) - bath.correlation(tau, -1)) < 1e-10);

  const auto single = matsubara_decomposition(BathFlavor::Fermionic, lower2(),
                                              1.0, 10.0, 0.0, 0.5, 1);
  CHECK(single.family_size() == 1);
}

TEST_CASE("correlation: tau=0 sums coefficients; envelope bound holds") {
  const auto bath = BathSpec::lorentzian_fermion(lower2(), 1.0, 10.0, 1.0, 0.5, 5);
  cx sum = 0.0;
  double abs_sum = 0.0, min_rate = 1e300;
  for (const auto& e : bath.fermionic_exponents())
    if (e.nu == +1) {
      sum += e.eta;
      abs_sum += std::abs(e.eta);
      min_rate = std::min(min_rate, e.gamma.real());
    }
  CHECK(std::abs(bath.correlation(0.0, +1) - sum) == 0.0);
  for (double tau : {0.1, 0.5, 2.0})
    CHECK(std::abs(bath.correlation(tau, +1)) <=
          abs_sum * std::exp(-min_rate * tau) + 1e-15);
}

TEST_CASE("correlation: lorentzian families coincide at mu=0") {
  const auto bath = BathSpec::lorentzian_fermion(lower2(), 1.0, 10.0, 0.0, 0.5, 7);
  for (double tau : {0.0, 0.2, 1.0, 5.0})
    CHECK(std::abs(bath.correlation(tau, +1) - bath.correlation(tau, -1)) < 1e-10);
}

TEST_CASE("correlation: usage errors") {
  const auto fermi = BathSpec::lorentzian_fermion(lower2(), 1.0, 10.0, 0.0, 0.5, 3);
  const auto bose = BathSpec::drude_lorentz_boson(sigma_z(), 0.01, 0.2, 0.5, 3);
  CHECK_THROWS_AS(bose.correlation(0.1, +1), UsageError);
  CHECK_THROWS_AS(fermi.correlation(0.1), UsageError);
  CHECK_THROWS_AS(fermi.correlation(-0.1, +1), ParameterError);
}

TEST_CASE("part-tag reconstruction sums to the full quadrature value") {
  const double Delta = 0.01, W = 0.2, kT = 0.5;
  const auto bath = BathSpec::drude_lorentz_boson(sigma_z(), Delta, W, kT, 5);
  const double c0 = std::abs(oracles::boson_correlation_quadrature(Delta, W, kT, 2.5));
  for (double tau : {2.5, 5.0, 12.5}) {
    cx re = 0.0, im = 0.0;
    for (const auto& e : bath.bosonic_exponents()) {
      if (e.part == BosonPart::Real) re += e.xi * std::exp(-e.chi * tau);
      if (e.part == BosonPart::Imag) im += e.xi * std::exp(-e.chi * tau);
    }
    const cx ref = oracles::boson_correlation_quadrature(Delta, W, kT, tau);
    CHECK(std::abs((re + iu * im) - ref) / c0 < 1e-4);
  }
}

TEST_CASE("user-supplied exponents are checked for decaying rates") {
  std::vector<FermionicExponent> plus{{cx(1, 0), cx(-0.1, 0), +1}};
  std::vector<FermionicExponent> minus{{cx(1, 0), cx(0.1, 0), -1}};
  CHECK_THROWS_AS(BathSpec::fermionic(lower2(), plus, minus), ParameterError);
  std::vector<FermionicExponent> odd{{cx(1, 0), cx(0.1, 0), +1}};
  CHECK_THROWS_AS(BathSpec::fermionic(lower2(), odd, {}), ParameterError);
  CHECK_THROWS_AS(
      BathSpec::bosonic(lower2(), {{cx(1, 0), cx(1, 0), BosonPart::Combined}}),
      ParameterError);  // non-Hermitian coupling
}
