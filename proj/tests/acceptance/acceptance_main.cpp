// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero on any failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heom/bath.hpp"
#include "heom/config.hpp"
#include "heom/hierarchy.hpp"
#include "heom/liouvillian.hpp"
#include "heom/observables.hpp"
#include "heom/oracles.hpp"
#include "heom/runner.hpp"
#include "heom/solvers.hpp"

using namespace heom;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%-4s %s (%s)\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

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

// --- criterion 1: ADO counts against the published table -------------------

void criterion_counts() {
  std::vector<BathSpec> baths;
  for (const char* lead : {"L", "R"})
    for (const char* chan : {"up", "dn"})
      baths.push_back(BathSpec::lorentzian_fermion(lower2(), 1.0, 10.0, 0.0, 0.5,
                                                   7, Decomposition::Pade, lead,
                                                   chan));
  const ExponentTable t = ExponentTable::build(baths);
  const std::vector<std::uint64_t> expected{57,     1597,    29317,
                                            396607, 4216423, 36684859};
  bool pass = t.K_f() == 56;
  std::ostringstream detail;
  detail << "K_f=" << t.K_f();
  for (int n_max = 1; n_max <= 6; ++n_max) {
    std::uint64_t count;
    if (n_max <= 4) {
      const auto space = HierarchySpace::enumerate(t, {0, n_max, 0.0});
      count = space->size();
    } else {
      count = HierarchySpace::count(t, {0, n_max, 0.0});  // count-only mode
    }
    detail << " n" << n_max << "=" << count;
    pass = pass && count == expected[static_cast<std::size_t>(n_max - 1)];
  }
  report("1 ado-counting", pass, detail.str());
}

// --- criterion 2: bath-correlation oracle ----------------------------------

void criterion_bath_oracle() {
  const auto f1 = oracles::run_suite("pade-fermi");
  const auto f2 = oracles::run_suite("pade-bose");
  const auto f3 = oracles::run_suite("matsubara");
  report("2 bath-correlation-oracle", f1.pass && f2.pass && f3.pass,
         f1.detail + f2.detail + f3.detail);
}

// --- criterion 3: generator oracle ------------------------------------------

void criterion_generator() {
  const auto r = oracles::run_suite("generator");
  report("3 generator-oracle", r.pass, r.detail);
}

// --- criterion 4: exactly solvable physics ----------------------------------

void criterion_solvable() {
  const auto a = oracles::run_suite("resonant-level");
  report("4a resonant-level-dos", a.pass, a.detail);
  const auto b = oracles::run_suite("dephasing");
  report("4b pure-dephasing", b.pass, b.detail);
  const auto c = oracles::run_suite("gibbs");
  report("4c lindblad-gibbs", c.pass, c.detail);
}

// --- criterion 5: structural invariants -------------------------------------

void criterion_structural() {
  // Toy fermionic transport model, interacting, at finite bias.
  DenseMatrix h = DenseMatrix::Zero(2, 2);
  h(1, 1) = -1.0;
  const SystemSpec sys = SystemSpec::constant(h);
  std::vector<BathSpec> baths{
      BathSpec::lorentzian_fermion(lower2(), 1.0, 10.0, 0.75, 0.5, 4,
                                   Decomposition::Pade, "L", "d"),
      BathSpec::lorentzian_fermion(lower2(), 1.0, 10.0, -0.75, 0.5, 4,
                                   Decomposition::Pade, "R", "d")};
  auto space = HierarchySpace::enumerate(ExponentTable::build(baths), {0, 2, 0.0});
  const HeomMatrix M = build_heomls(sys, baths, space, Parity::Even, 1);

  DenseMatrix rho0(2, 2);
  rho0 << 0.35, cx(0.25, 0.15), cx(0.25, -0.15), 0.65;
  const AdosVector x0 = AdosVector::from_reduced(rho0, space);
  const auto t_list = linspace(0.0, 8.0, 17);

  OdeOptions ode;
  const auto traj = evolve_ode(M, x0, t_list, ode);
  double trace_drift = 0.0, herm = 0.0;
  for (const auto& st : traj) {
    const DenseMatrix r = st.root();
    trace_drift = std::max(trace_drift, std::abs(r.trace().real() - 1.0) +
                                            std::abs(r.trace().imag()));
    herm = std::max(herm,
                    (r - r.adjoint().eval()).cwiseAbs().maxCoeff());
  }
  report("5a trace-conservation", trace_drift <= 1e-8,
         "drift=" + std::to_string(trace_drift));
  report("5b root-hermiticity", herm <= 1e-8, "defect=" + std::to_string(herm));

  SolveReport ss_rep;
  const AdosVector ss = steadystate(M, {}, &ss_rep);
  report("5c steadystate-residual", ss_rep.residual <= 1e-10,
         "residual=" + std::to_string(ss_rep.residual));

  const auto traj_exp = evolve_expm(M, x0, t_list);
  double dev = 0.0;
  for (std::size_t i = 0; i < t_list.size(); ++i)
    dev = std::max(dev, (traj[i].root() - traj_exp[i].root())
                            .cwiseAbs()
                            .maxCoeff());
  report("5d ode-expm-agreement", dev <= 1e-6, "max dev=" + std::to_string(dev));

  // Thread-count determinism through the CLI pipeline, byte-for-byte.
  RunConfig cfg = parse_config_file(std::string(HEOM_CONFIG_DIR) +
                                    "/example1_reduced.json");
  cfg.json()["tasks"][1]["omega"] = {{"from", -8.0}, {"to", 8.0}, {"points", 17}};
  cfg.json()["tasks"][2]["phi"] = {{"from", 0.0}, {"to", 2.0}, {"points", 3}};
  const fs::path out1 = fs::temp_directory_path() / "heom_acc_t1";
  const fs::path out8 = fs::temp_directory_path() / "heom_acc_t8";
  fs::remove_all(out1);
  fs::remove_all(out8);
  bool identical = true;
  {
    RunConfig c1 = parse_config(serialize(cfg));
    c1.json()["threads"] = 1;
    c1.json()["output"]["directory"] = out1.string();
    run(parse_config(serialize(c1)));
    RunConfig c8 = parse_config(serialize(cfg));
    c8.json()["threads"] = 8;
    c8.json()["output"]["directory"] = out8.string();
    run(parse_config(serialize(c8)));
    for (const char* name : {"steadystate.csv", "dos.csv", "conductance.csv"}) {
      std::ifstream a(out1 / name), b(out8 / name);
      std::stringstream sa, sb;
      sa << a.rdbuf();
      sb << b.rdbuf();
      identical = identical && sa.str() == sb.str();
    }
  }
  fs::remove_all(out1);
  fs::remove_all(out8);
  report("5e thread-determinism", identical, "1 vs 8 threads, three CSVs");
}

// --- criterion 6: qualitative figure reproduction at reduced tier -----------

Model example1_model(double phi, int n_exp, double i_th, int n_max) {
  RunConfig cfg = parse_config_file(std::string(HEOM_CONFIG_DIR) +
                                    "/example1_reduced.json");
  cfg.json()["baths"][0]["n_exp"] = n_exp;
  cfg.json()["baths"][1]["n_exp"] = n_exp;
  cfg.json()["truncation"]["n_max"] = n_max;
  cfg.json()["truncation"]["importance_threshold"] = i_th;
  const RunConfig v = parse_config(serialize(cfg));
  return build_model(v, phi);
}

std::shared_ptr<const HierarchySpace> example1_space(const Model& m, double i_th,
                                                     int n_max) {
  return HierarchySpace::enumerate(ExponentTable::build(m.baths),
                                   {0, n_max, i_th});
}

void criterion_figures() {
  const int threads = 4;

  {  // Fig 3(a): Hubbard peaks near -5 and +5 meV at equilibrium.
    const Model m = example1_model(0.0, 3, 1e-7, 3);
    auto space = example1_space(m, 1e-7, 3);
    const HeomMatrix Me = build_heomls(m.system, m.baths, space, Parity::Even, threads);
    const HeomMatrix Mo = build_heomls(m.system, m.baths, space, Parity::Odd, threads);
    const AdosVector ss = steadystate(Me);
    SpectrumOptions sopt;
    sopt.threads = threads;
    const auto grid = linspace(-10.0, 10.0, 161);
    const SpectrumResult s = dos(Mo, ss, m.ops.at("d_up"), grid, sopt);

    // Local maxima of A(w) nearest -5 and +5.
    double low_peak = 0, high_peak = 0, low_val = -1, high_val = -1;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      if (s.value[i] > s.value[i - 1] && s.value[i] >= s.value[i + 1]) {
        if (grid[i] < -2 && s.value[i] > low_val) {
          low_val = s.value[i];
          low_peak = grid[i];
        }
        if (grid[i] > 2 && s.value[i] > high_val) {
          high_val = s.value[i];
          high_peak = grid[i];
        }
      }
    }
    std::ostringstream detail;
    detail << "peaks at " << low_peak << " and " << high_peak;
    report("6a hubbard-peaks",
           std::abs(low_peak + 5.0) <= 0.5 && std::abs(high_peak - 5.0) <= 0.5,
           detail.str());

    double amin = 1e300;
    for (double v : s.value) amin = std::min(amin, v);
    report("6a' dos-positivity", amin >= -1e-6, "min A=" + std::to_string(amin));
  }

  {  // Fig 3(b): conductance maximum at phi = 0.
    const auto phis = linspace(0.0, 4.0, 9);
    std::vector<double> bias_grid, currents;
    // Use the symmetric extension I(-phi) = -I(phi) to center the stencil.
    for (double p : phis) {
      const Model m = example1_model(p, 3, 1e-7, 3);
      auto space = example1_space(m, 1e-7, 3);
      const HeomMatrix Me =
          build_heomls(m.system, m.baths, space, Parity::Even, threads);
      const AdosVector ss = steadystate(Me);
      currents.push_back(current(ss, "L", p).value);
      bias_grid.push_back(p);
    }
    std::vector<double> full_phi, full_cur;
    for (std::size_t i = phis.size(); i-- > 1;) {
      full_phi.push_back(-phis[i]);
      full_cur.push_back(-currents[i]);
    }
    for (std::size_t i = 0; i < phis.size(); ++i) {
      full_phi.push_back(phis[i]);
      full_cur.push_back(currents[i]);
    }
    const auto g = conductance(full_phi, full_cur);
    double gmax = -1e300, arg = 0;
    for (const auto& [p, gv] : g)
      if (gv > gmax) {
        gmax = gv;
        arg = p;
      }
    report("6b conductance-peak-at-zero", std::abs(arg) < 1e-12,
           "argmax=" + std::to_string(arg) + " G=" + std::to_string(gmax));
  }

  {  // Fig 4(b): cavity PSD peak at w = w_c = 1 (ultra-strong coupling).
    RunConfig cfg = parse_config_file(std::string(HEOM_CONFIG_DIR) +
                                      "/example2_reduced.json");
    const RunConfig v = parse_config(serialize(cfg));
    const Model m = build_model(v, 6.0);
    auto space = enumerate_model(v, m);
    const HeomMatrix Me = build_heomls(m.system, m.baths, space, Parity::Even, threads);
    const AdosVector ss = steadystate(Me);
    SpectrumOptions sopt;
    sopt.threads = threads;
    const auto grid = linspace(0.5, 1.5, 41);
    const SpectrumResult s = psd(Me, ss, m.ops.at("a"), grid, sopt);
    double best = -1e300, arg = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (s.value[i] > best) {
        best = s.value[i];
        arg = grid[i];
      }
    report("6c psd-peak-at-cavity-frequency", std::abs(arg - 1.0) <= 0.05,
           "argmax=" + std::to_string(arg));
  }

  {  // Fig 6: current converges through decreasing importance thresholds.
    const auto phis = linspace(0.5, 3.5, 4);
    const auto sweep = [&](double i_th) {
      std::vector<double> cur;
      for (double p : phis) {
        const Model m = example1_model(p, 3, i_th, 3);
        auto space = example1_space(m, i_th, 3);
        const HeomMatrix Me =
            build_heomls(m.system, m.baths, space, Parity::Even, threads);
        const AdosVector ss = steadystate(Me);
        cur.push_back(current(ss, "L", p).value);
      }
      return cur;
    };
    const auto exact = sweep(0.0);
    const auto dev = [&](const std::vector<double>& c) {
      double worst = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i)
        worst = std::max(worst, std::abs(c[i] - exact[i]));
      return worst;
    };
    const double d5 = dev(sweep(1e-5));
    const double d7 = dev(sweep(1e-7));
    std::ostringstream detail;
    detail << "dev(1e-5)=" << d5 << " dev(1e-7)=" << d7;
    report("6d importance-convergence", d5 >= d7 && d7 <= 1e-4, detail.str());
  }
}

// --- criterion 7: conservation observables ----------------------------------

void criterion_conservation() {
  {  // I_L = 0 at phi = 0.
    const Model m = example1_model(0.0, 3, 0.0, 2);
    auto space = example1_space(m, 0.0, 2);
    const HeomMatrix Me = build_heomls(m.system, m.baths, space, Parity::Even, 2);
    const AdosVector ss = steadystate(Me);
    const double il = current(ss, "L").value;
    report("7a zero-bias-current", std::abs(il) <= 1e-10,
           "I_L=" + std::to_string(il));
  }
  {  // I_L + I_R = 0 at finite bias.
    const Model m = example1_model(2.0, 3, 0.0, 2);
    auto space = example1_space(m, 0.0, 2);
    const HeomMatrix Me = build_heomls(m.system, m.baths, space, Parity::Even, 2);
    const AdosVector ss = steadystate(Me);
    const double il = current(ss, "L").value;
    const double ir = current(ss, "R").value;
    report("7b current-conservation", std::abs(il + ir) <= 1e-8,
           "I_L+I_R=" + std::to_string(il + ir) + " (I_L=" + std::to_string(il) +
               ")");
  }
}

}  // namespace

int main() {
  criterion_counts();
  criterion_bath_oracle();
  criterion_generator();
  criterion_solvable();
  criterion_structural();
  criterion_figures();
  criterion_conservation();
  std::printf("%s (%d failure%s)\n", failures == 0 ? "ALL PASS" : "FAILURES",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
