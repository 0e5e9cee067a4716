#pragma once

#include <string>
#include <vector>

#include "heom/solvers.hpp"
#include "heom/types.hpp"

namespace heom {

enum class SpectrumKind { DOS, PSD };

struct SpectrumResult {
  std::vector<double> omega;
  std::vector<double> value;
  SpectrumKind kind = SpectrumKind::DOS;
  double max_residual = 0.0;  // worst shifted-solve residual over the grid
};

struct CurrentResult {
  std::string bath_id;
  double value = 0.0;  // in units of e*meV/hbar (e = 1 internally)
  double phi = 0.0;    // bias voltage label
};

struct SpectrumOptions {
  LinearOptions linear;
  int threads = 1;
};

// Root block of the stacked state.
DenseMatrix reduced_density(const AdosVector& ados);

// Tr[op * rho^(0,0)].
cx expectation(const AdosVector& ados, const DenseMatrix& op);

// Density of states A(w) from the odd-parity generator and the even-sector
// steady state: one (M + i w) and one (M - i w) solve per grid point, trace
// on the root block, 1/pi prefactor divided out.
SpectrumResult dos(const HeomMatrix& M_odd, const AdosVector& steady,
                   const DenseMatrix& d_op, const std::vector<double>& omega_grid,
                   const SpectrumOptions& opt = {});

// Power spectral density S(w) from the even-parity generator.
SpectrumResult psd(const HeomMatrix& M_even, const AdosVector& steady,
                   const DenseMatrix& a_op, const std::vector<double>& omega_grid,
                   const SpectrumOptions& opt = {});

// Electronic current from bath `bath_id` into the system, evaluated from the
// first-level-fermionic ADOs of that bath.
CurrentResult current(const AdosVector& ados, const std::string& bath_id,
                      double phi = 0.0);

// Differential conductance dI/dPhi by central differences (one-sided at the
// ends). The grid must be uniform with at least 3 points.
std::vector<std::pair<double, double>> conductance(
    const std::vector<double>& phi_grid, const std::vector<double>& currents);

// CSV writers (%.12g formatting).
void write_spectrum_csv(const std::string& path, const SpectrumResult& s);
void write_sweep_csv(const std::string& path, const std::vector<double>& phi,
                     const std::vector<double>& current,
                     const std::vector<double>& conductance);
void write_trajectory_csv(const std::string& path,
                          const std::vector<double>& t_list,
                          const std::vector<std::string>& names,
                          const std::vector<std::vector<cx>>& values);

}  // namespace heom
