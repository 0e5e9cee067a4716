#include "heom/pade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace heom::pade {
namespace {

// Positive values 2/lambda for the positive eigenvalues lambda of the
// symmetric tridiagonal matrix with off-diagonal 1/sqrt(b_m * b_{m+1}),
// m = 1..size-1, where b_m = 2*m + b0.
std::vector<double> tridiag_poles(int size, int b0, int take) {
  if (size <= 0 || take <= 0) return {};
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
  for (int m = 1; m < size; ++m) {
    const double bm = 2.0 * m + b0;
    const double bn = 2.0 * (m + 1) + b0;
    a(m - 1, m) = 1.0 / std::sqrt(bm * bn);
    a(m, m - 1) = a(m - 1, m);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (int i = 0; i < size; ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > 0) out.push_back(2.0 / lam);
  }
  std::sort(out.begin(), out.end());
  out.resize(static_cast<std::size_t>(take));
  return out;
}

// Shared [P-1/P] construction; b0 = -1 selects the fermi continued fraction
// (b = 1,3,5,...), b0 = +1 the bose one (b = 3,5,7,...).
std::vector<PsdTerm> psd(int pairs, int b0, double prefactor) {
  if (pairs < 0) throw ParameterError("pade: number of pole pairs must be >= 0");
  if (pairs == 0) return {};
  const std::vector<double> zeta = tridiag_poles(2 * pairs, b0, pairs);
  const std::vector<double> chi = tridiag_poles(2 * pairs - 1, b0 + 2, pairs - 1);

  std::vector<PsdTerm> terms(pairs);
  for (int j = 0; j < pairs; ++j) {
    const double zj2 = zeta[j] * zeta[j];
    double kappa = prefactor;
    for (int k = 0; k + 1 < pairs; ++k) kappa *= chi[k] * chi[k] - zj2;
    for (int k = 0; k < pairs; ++k) {
      if (k == j) continue;
      kappa /= zeta[k] * zeta[k] - zj2;
    }
    terms[j] = {kappa, zeta[j]};
  }
  return terms;
}

}  // namespace

std::vector<PsdTerm> fermi_pade(int pairs) {
  // prefactor N(2N+1)/2 reproduces the exact residue in the N=1 case.
  return psd(pairs, -1, 0.5 * pairs * (2.0 * pairs + 1.0));
}

std::vector<PsdTerm> bose_pade(int pairs) {
  return psd(pairs, +1, 0.5 * pairs * (2.0 * pairs + 3.0));
}

std::vector<PsdTerm> fermi_matsubara(int pairs) {
  std::vector<PsdTerm> terms;
  for (int h = 1; h <= pairs; ++h)
    terms.push_back({1.0, (2.0 * h - 1.0) * std::numbers::pi});
  return terms;
}

std::vector<PsdTerm> bose_matsubara(int pairs) {
  std::vector<PsdTerm> terms;
  for (int l = 1; l <= pairs; ++l)
    terms.push_back({1.0, 2.0 * l * std::numbers::pi});
  return terms;
}

cx fermi_eval(const std::vector<PsdTerm>& terms, cx x) {
  cx f = 0.5;
  for (const auto& t : terms) f -= 2.0 * t.kappa * x / (x * x + t.zeta * t.zeta);
  return f;
}

cx bose_eval(const std::vector<PsdTerm>& terms, cx x) {
  cx f = 1.0 / x - 0.5;
  for (const auto& t : terms) f += 2.0 * t.kappa * x / (x * x + t.zeta * t.zeta);
  return f;
}

}  // namespace heom::pade
