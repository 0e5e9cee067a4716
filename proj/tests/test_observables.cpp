#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heom/observables.hpp"
#include "heom/oracles.hpp"
#include "heom/solvers.hpp"

using namespace heom;

namespace {

DenseMatrix lower2() {
  DenseMatrix d(2, 2);
  d << 0, 1, 0, 0;
  return d;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

// Symmetric two-lead resonant level at bias phi.
struct LeadModel {
  SystemSpec sys;
  std::vector<BathSpec> baths;
  std::shared_ptr<const HierarchySpace> space;
};

LeadModel lead_model(double phi, int n_exp = 4, int n_max = 2) {
  LeadModel m;
  DenseMatrix h = DenseMatrix::Zero(2, 2);
  h(1, 1) = -1.0;
  m.sys = SystemSpec::constant(h);
  m.baths = {BathSpec::lorentzian_fermion(lower2(), 1.0, 10.0, 0.5 * phi, 0.5,
                                          n_exp, Decomposition::Pade, "L", "d"),
             BathSpec::lorentzian_fermion(lower2(), 1.0, 10.0, -0.5 * phi, 0.5,
                                          n_exp, Decomposition::Pade, "R", "d")};
  m.space = HierarchySpace::enumerate(ExponentTable::build(m.baths),
                                      {0, n_max, 0.0});
  return m;
}

}  // namespace

TEST_CASE("reduced density and expectation basics") {
  const LeadModel m = lead_model(0.0);
  DenseMatrix rho0(2, 2);
  rho0 << 0.6, cx(0.2, 0.1), cx(0.2, -0.1), 0.4;
  const AdosVector x0 = AdosVector::from_reduced(rho0, m.space);
  CHECK((reduced_density(x0) - rho0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(expectation(x0, DenseMatrix::Identity(2, 2)) == rho0.trace());
  CHECK(expectation(x0, DenseMatrix::Zero(2, 2)) == cx(0, 0));
  CHECK_THROWS_AS(expectation(x0, DenseMatrix::Zero(3, 3)), ParameterError);
}

TEST_CASE("resonant-level DOS matches the hybridized Green's function") {
  const auto result = oracles::run_suite("resonant-level");
  INFO(result.detail);
  CHECK(result.pass);
}

TEST_CASE("DOS sum rule and positivity on the resonant level") {
  const LeadModel m = lead_model(0.0, 6, 2);
  const HeomMatrix Me = build_heomls(m.sys, m.baths, m.space, Parity::Even);
  const HeomMatrix Mo = build_heomls(m.sys, m.baths, m.space, Parity::Odd);
  const AdosVector ss = steadystate(Me);
  const auto grid = linspace(-24, 24, 241);
  const SpectrumResult s = dos(Mo, ss, lower2(), grid);

  double integral = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    integral += 0.5 * (s.value[i] + s.value[i - 1]) * (grid[i] - grid[i - 1]);
  CHECK(integral == doctest::Approx(1.0).epsilon(0.02));
  for (double v : s.value) CHECK(v >= -1e-6);

  // Parity misuse is rejected.
  CHECK_THROWS_AS(dos(Me, ss, lower2(), grid), UsageError);
}

TEST_CASE("PSD of a lindblad-damped thermal cavity is the analytic lorentzian") {
  const int nf = 12;
  DenseMatrix a = DenseMatrix::Zero(nf, nf);
  for (int k = 1; k < nf; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const double wc = 1.0, kappa = 0.1, kT = 0.5;
  const double nbar = 1.0 / std::expm1(wc / kT);

  auto space = HierarchySpace::enumerate(ExponentTable::build({}), {0, 0, 0.0});
  HeomMatrix M = build_heomls(
      SystemSpec::constant(wc * DenseMatrix(a.adjoint() * a)), {}, space,
      Parity::Even);
  M.add_lindblad(std::sqrt(kappa * (nbar + 1.0)) * a);
  M.add_lindblad(std::sqrt(kappa * nbar) * DenseMatrix(a.adjoint()));

  const AdosVector ss = steadystate(M);
  const auto grid = linspace(0.2, 1.8, 161);
  const SpectrumResult s = psd(M, ss, a, grid);

  double worst = 0.0, peak = 0.0;
  double peak_w = 0.0, peak_v = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid[i];
    const double ref = nbar / std::numbers::pi * (kappa / 2) /
                       ((w - wc) * (w - wc) + kappa * kappa / 4);
    worst = std::max(worst, std::abs(s.value[i] - ref));
    peak = std::max(peak, ref);
    if (s.value[i] > peak_v) {
      peak_v = s.value[i];
      peak_w = w;
    }
  }
  CHECK(worst / peak < 0.05);
  CHECK(std::abs(peak_w - wc) <= 0.011);

  // a = 0 gives S = 0.
  const SpectrumResult zero = psd(M, ss, DenseMatrix::Zero(nf, nf), grid);
  for (double v : zero.value) CHECK(v == 0.0);
}

TEST_CASE("current vanishes at zero bias and balances at steady state") {
  const LeadModel m = lead_model(0.0);
  const HeomMatrix Me = build_heomls(m.sys, m.baths, m.space, Parity::Even);
  const AdosVector ss = steadystate(Me);
  const CurrentResult il = current(ss, "L");
  CHECK(std::abs(il.value) < 1e-10);
  CHECK_THROWS_AS(current(ss, "X"), NotFoundError);

  const LeadModel mb = lead_model(1.5);
  const HeomMatrix Mb = build_heomls(mb.sys, mb.baths, mb.space, Parity::Even);
  const AdosVector ssb = steadystate(Mb);
  const double l = current(ssb, "L").value;
  const double r = current(ssb, "R").value;
  CHECK(std::abs(l) > 1e-4);  // genuinely transporting
  CHECK(std::abs(l + r) < 1e-8);
}

TEST_CASE("current is antisymmetric under bias reversal") {
  for (double phi : {0.5, 1.5}) {
    const LeadModel mp = lead_model(phi);
    const LeadModel mm = lead_model(-phi);
    const AdosVector ssp =
        steadystate(build_heomls(mp.sys, mp.baths, mp.space, Parity::Even));
    const AdosVector ssm =
        steadystate(build_heomls(mm.sys, mm.baths, mm.space, Parity::Even));
    CHECK(std::abs(current(ssp, "L").value + current(ssm, "L").value) < 1e-8);
  }
}

TEST_CASE("conductance differentiates exactly on linear and quadratic data") {
  const auto phi = linspace(-1, 1, 9);
  std::vector<double> lin, quad;
  for (double p : phi) {
    lin.push_back(3.0 * p);
    quad.push_back(p * p);
  }
  const auto g_lin = conductance(phi, lin);
  for (const auto& [p, g] : g_lin) CHECK(g == doctest::Approx(3.0).epsilon(1e-12));

  // Central differences are exact on quadratics in the interior.
  const auto g_quad = conductance(phi, quad);
  for (std::size_t i = 1; i + 1 < phi.size(); ++i)
    CHECK(g_quad[i].second == doctest::Approx(2.0 * phi[i]).epsilon(1e-10));

  CHECK_THROWS_AS(conductance({0.0, 1.0}, {0.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(conductance({0.0, 0.1, 0.3}, {0.0, 0.0, 0.0}), ParameterError);
}

TEST_CASE("conductance derivative converges at second order") {
  // f(phi) = sin(phi): interior error should shrink ~h^2.
  const auto err_at = [](int points) {
    const auto phi = linspace(-1, 1, points);
    std::vector<double> cur;
    for (double p : phi) cur.push_back(std::sin(p));
    const auto g = conductance(phi, cur);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < phi.size(); ++i)
      worst = std::max(worst, std::abs(g[i].second - std::cos(phi[i])));
    return worst;
  };
  const double e1 = err_at(11), e2 = err_at(21);
  CHECK(e2 < e1 / 3.0);  // ~4x for a clean O(h^2) method
}
