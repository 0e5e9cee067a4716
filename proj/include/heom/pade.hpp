#pragma once

#include <vector>

#include "heom/types.hpp"

namespace heom::pade {

// One pole/residue pair of a spectrum decomposition of the Fermi-Dirac or
// Bose-Einstein function in the dimensionless variable x = (omega - mu)/kT:
//
//   fermi:  1/(e^x + 1) ~ 1/2 - sum_h 2*kappa_h*x / (x^2 + zeta_h^2)
//   bose:   1/(e^x - 1) ~ 1/x - 1/2 + sum_l 2*kappa_l*x / (x^2 + zeta_l^2)
struct PsdTerm {
  double kappa = 0.0;  // residue
  double zeta = 0.0;   // pole, > 0
};

// [P-1/P] Pade decomposition with P pole pairs. The poles are 2/lambda for the
// positive eigenvalues lambda of a symmetric tridiagonal matrix built from the
// continued-fraction coefficients of tanh(x/2) (fermi) or coth(x/2) - 2/x
// (bose); residues follow from the companion matrix of the approximant zeros.
// Returned sorted by ascending zeta. P = 0 yields the empty list.
std::vector<PsdTerm> fermi_pade(int pairs);
std::vector<PsdTerm> bose_pade(int pairs);

// Matsubara decomposition: unit residues at the exact poles
// (2h-1)*pi (fermi) or 2l*pi (bose).
std::vector<PsdTerm> fermi_matsubara(int pairs);
std::vector<PsdTerm> bose_matsubara(int pairs);

// Evaluate the decomposed distribution at (complex) x.
cx fermi_eval(const std::vector<PsdTerm>& terms, cx x);
cx bose_eval(const std::vector<PsdTerm>& terms, cx x);

}  // namespace heom::pade
