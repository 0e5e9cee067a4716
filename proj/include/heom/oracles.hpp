#pragma once

#include <string>
#include <vector>

#include "heom/liouvillian.hpp"
#include "heom/types.hpp"

// Independent reference computations used to validate the engine: quadrature
// of the bath correlation integrals, a literal ordered-vector construction of
// the hierarchy generator, and closed-form solvable models. Each route avoids
// the implementation path it checks.
namespace heom::oracles {

// Adaptive Gauss-Kronrod quadrature of the fermionic correlation integral
// over a Lorentzian spectral density (window mu +- 50 W).
cx fermion_correlation_quadrature(double Gamma, double W, double mu, double kT,
                                  int nu, double tau);

// Same for the bosonic Drude-Lorentz correlation integral over (0, 50 W];
// the w -> 0 limit of the integrand is evaluated analytically.
cx boson_correlation_quadrature(double Delta, double W, double kT, double tau);

// Literal construction of the hierarchy generator over ordered multi-index
// vectors: permutation signs by explicit insertion sort, lowering terms by
// explicit per-position sums. Canonical labels and entry merge order mirror
// the production convention so the two matrices can be compared exactly.
DenseMatrix naive_ordered_vector_heomls(const SystemSpec& system,
                                        std::shared_ptr<const HierarchySpace> space,
                                        Parity parity);

// Full ordered-vector state space (all index permutations materialized):
// returns the max abs defect of M_vec * E - E * M_set where E embeds the
// canonical-set stack with fermionic permutation signs.
double ordered_vector_embedding_defect(const SystemSpec& system,
                                       const std::vector<BathSpec>& baths,
                                       int m_max, int n_max, Parity parity);

// Retarded-Green's-function density of states of the noninteracting resonant
// level: A(w) = -Im[1/(w - eps - sum_a (G_a W_a/2)/(w - mu_a + i W_a))]/pi.
double resonant_level_dos(double eps, const std::vector<double>& Gamma,
                          const std::vector<double>& W,
                          const std::vector<double>& mu, double omega);

// Pure-dephasing decoherence exponent 4 * int_0^t (t-s) Re C(s) ds with C by
// quadrature; |rho01(t)| = |rho01(0)| exp(-value).
double dephasing_exponent(double Delta, double W, double kT, double t);

// Named oracle suites exposed through the CLI.
struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name);

}  // namespace heom::oracles
