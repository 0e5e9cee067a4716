#include "heom/bath.hpp"

#include <cmath>

#include "heom/pade.hpp"

namespace heom {
namespace {

void check_square(const DenseMatrix& op) {
  if (op.rows() == 0 || op.rows() != op.cols())
    throw ParameterError("bath: coupling operator must be a nonempty square matrix");
}

void check_rates_fermionic(const std::vector<FermionicExponent>& exps) {
  for (const auto& e : exps) {
    if (!(e.gamma.real() > 0.0))
      throw ParameterError("bath: every fermionic decay rate needs Re(gamma) > 0");
    if (e.nu != 1 && e.nu != -1)
      throw ParameterError("bath: nu must be +1 or -1");
  }
}

void check_rates_bosonic(const std::vector<BosonicExponent>& exps) {
  for (const auto& e : exps)
    if (!(e.chi.real() > 0.0))
      throw ParameterError("bath: every bosonic decay rate needs Re(chi) > 0");
}

std::vector<pade::PsdTerm> distribution_terms(BathFlavor flavor, Decomposition dec, int pairs) {
  if (flavor == BathFlavor::Fermionic)
    return dec == Decomposition::Pade ? pade::fermi_pade(pairs) : pade::fermi_matsubara(pairs);
  return dec == Decomposition::Pade ? pade::bose_pade(pairs) : pade::bose_matsubara(pairs);
}

}  // namespace

BathSpec BathSpec::lorentzian_fermion(DenseMatrix d_op, double Gamma, double W,
                                      double mu, double kT, int N,
                                      Decomposition dec, std::string bath_id,
                                      std::string channel) {
  check_square(d_op);
  if (Gamma < 0.0) throw ParameterError("lorentzian_fermion: Gamma must be >= 0");
  if (!(W > 0.0)) throw ParameterError("lorentzian_fermion: W must be > 0");
  if (!(kT > 0.0)) throw ParameterError("lorentzian_fermion: kT must be > 0");
  if (N < 1) throw ParameterError("lorentzian_fermion: N must be >= 1");

  const auto terms = distribution_terms(BathFlavor::Fermionic, dec, N - 1);

  BathSpec b;
  b.flavor_ = BathFlavor::Fermionic;
  b.op_ = std::move(d_op);
  b.bath_id_ = std::move(bath_id);
  b.channel_ = std::move(channel);
  b.fexp_.reserve(2 * static_cast<std::size_t>(N));
  for (int nu : {+1, -1}) {
    // Spectral-density pole: eta_1 = Gamma*W/2 * n(i W/kT), gamma_1 = W - i nu mu.
    const cx eta1 = 0.5 * Gamma * W * pade::fermi_eval(terms, iu * W / kT);
    b.fexp_.push_back({eta1, cx(W, -nu * mu), nu});
    for (const auto& t : terms) {
      const double zkT = t.zeta * kT;
      const cx eta = -iu * t.kappa * kT * Gamma * W * W / (W * W - zkT * zkT);
      b.fexp_.push_back({eta, cx(zkT, -nu * mu), nu});
    }
  }
  check_rates_fermionic(b.fexp_);
  return b;
}

BathSpec BathSpec::drude_lorentz_boson(DenseMatrix v_op, double Delta, double W,
                                       double kT, int N, Decomposition dec,
                                       std::string bath_id, std::string channel) {
  check_square(v_op);
  if (!is_hermitian(v_op))
    throw ParameterError("drude_lorentz_boson: coupling operator must be Hermitian");
  if (Delta < 0.0) throw ParameterError("drude_lorentz_boson: Delta must be >= 0");
  if (!(W > 0.0)) throw ParameterError("drude_lorentz_boson: W must be > 0");
  if (!(kT > 0.0)) throw ParameterError("drude_lorentz_boson: kT must be > 0");
  if (N < 1) throw ParameterError("drude_lorentz_boson: N must be >= 1");

  const double half = 0.5 * W / kT;
  if (std::abs(std::sin(half)) < 1e-12)
    throw ParameterError(
        "drude_lorentz_boson: W/(2 kT) hits a pole of cot; perturb W or kT");

  const auto terms = distribution_terms(BathFlavor::Bosonic, dec, N - 1);

  BathSpec b;
  b.flavor_ = BathFlavor::Bosonic;
  b.op_ = std::move(v_op);
  b.bath_id_ = std::move(bath_id);
  b.channel_ = std::move(channel);
  // Pole term xi_1 = Delta*W*(cot(W/2kT) - i), chi_1 = W, split by part.
  b.bexp_.push_back({cx(Delta * W / std::tan(half), 0.0), cx(W, 0.0), BosonPart::Real});
  b.bexp_.push_back({cx(-Delta * W, 0.0), cx(W, 0.0), BosonPart::Imag});
  for (const auto& t : terms) {
    const double zkT = t.zeta * kT;
    // All chi_l real: no further real/imaginary decomposition required.
    const double xi = -2.0 * t.kappa * kT * 2.0 * Delta * W * zkT / (W * W - zkT * zkT);
    b.bexp_.push_back({cx(xi, 0.0), cx(zkT, 0.0), BosonPart::Real});
  }
  check_rates_bosonic(b.bexp_);
  return b;
}

BathSpec BathSpec::fermionic(DenseMatrix d_op,
                             std::vector<FermionicExponent> nu_plus,
                             std::vector<FermionicExponent> nu_minus,
                             std::string bath_id, std::string channel) {
  check_square(d_op);
  if (nu_plus.size() != nu_minus.size())
    throw ParameterError("bath: fermionic nu families must have equal length");
  BathSpec b;
  b.flavor_ = BathFlavor::Fermionic;
  b.op_ = std::move(d_op);
  b.bath_id_ = std::move(bath_id);
  b.channel_ = std::move(channel);
  for (auto& e : nu_plus) {
    e.nu = +1;
    b.fexp_.push_back(e);
  }
  for (auto& e : nu_minus) {
    e.nu = -1;
    b.fexp_.push_back(e);
  }
  check_rates_fermionic(b.fexp_);
  return b;
}

BathSpec BathSpec::bosonic(DenseMatrix v_op, std::vector<BosonicExponent> exps,
                           std::string bath_id, std::string channel) {
  check_square(v_op);
  if (!is_hermitian(v_op))
    throw ParameterError("bath: bosonic coupling operator must be Hermitian");
  BathSpec b;
  b.flavor_ = BathFlavor::Bosonic;
  b.op_ = std::move(v_op);
  b.bath_id_ = std::move(bath_id);
  b.channel_ = std::move(channel);
  b.bexp_ = std::move(exps);
  check_rates_bosonic(b.bexp_);
  return b;
}

const std::vector<FermionicExponent>& BathSpec::fermionic_exponents() const {
  if (flavor_ != BathFlavor::Fermionic)
    throw UsageError("bath: fermionic_exponents() on a bosonic bath");
  return fexp_;
}

const std::vector<BosonicExponent>& BathSpec::bosonic_exponents() const {
  if (flavor_ != BathFlavor::Bosonic)
    throw UsageError("bath: bosonic_exponents() on a fermionic bath");
  return bexp_;
}

int BathSpec::family_size() const {
  return flavor_ == BathFlavor::Fermionic ? static_cast<int>(fexp_.size() / 2)
                                          : static_cast<int>(bexp_.size());
}

cx BathSpec::correlation(double tau, std::optional<int> nu) const {
  if (tau < 0.0) throw ParameterError("correlation: tau must be >= 0");
  if (flavor_ == BathFlavor::Bosonic) {
    if (nu.has_value())
      throw UsageError("correlation: nu is only meaningful for fermionic baths");
    cx c = 0.0;
    for (const auto& e : bexp_) {
      const cx term = e.xi * std::exp(-e.chi * tau);
      c += e.part == BosonPart::Imag ? iu * term : term;
    }
    return c;
  }
  if (!nu.has_value())
    throw UsageError("correlation: fermionic baths require nu = +1 or -1");
  if (*nu != 1 && *nu != -1) throw UsageError("correlation: nu must be +1 or -1");
  cx c = 0.0;
  for (const auto& e : fexp_)
    if (e.nu == *nu) c += e.eta * std::exp(-e.gamma * tau);
  return c;
}

BathSpec matsubara_decomposition(BathFlavor flavor, DenseMatrix op,
                                 double strength, double W, double mu,
                                 double kT, int N, std::string bath_id,
                                 std::string channel) {
  if (flavor == BathFlavor::Fermionic)
    return BathSpec::lorentzian_fermion(std::move(op), strength, W, mu, kT, N,
                                        Decomposition::Matsubara,
                                        std::move(bath_id), std::move(channel));
  return BathSpec::drude_lorentz_boson(std::move(op), strength, W, kT, N,
                                       Decomposition::Matsubara,
                                       std::move(bath_id), std::move(channel));
}

}  // namespace heom
