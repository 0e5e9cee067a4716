#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heom/types.hpp"

namespace heom {

enum class BathFlavor { Fermionic, Bosonic };
enum class BosonPart { Real, Imag, Combined };
enum class Decomposition { Pade, Matsubara };

// One term of C^nu(tau) = sum_h eta_h exp(-gamma_h tau) for a fermionic bath.
// nu = +1 tags the conjugated correlation (creation side), nu = -1 the plain
// one. Energies in meV, times in hbar/meV.
struct FermionicExponent {
  cx eta;
  cx gamma;  // Re > 0
  int nu = +1;
};

// One term of the bosonic correlation expansion. `part` records whether the
// term carries the real part, the imaginary part (entering with a factor i),
// or an unsplit complex coefficient.
struct BosonicExponent {
  cx xi;
  cx chi;  // Re > 0
  BosonPart part = BosonPart::Combined;
};

// A system coupling operator together with the exponential expansion of its
// bath correlation function. Immutable after construction.
class BathSpec {
 public:
  // Lorentzian spectral density Gamma*W^2/((w-mu)^2+W^2); N exponents per nu
  // family: the spectral-density pole first, then N-1 distribution poles.
  static BathSpec lorentzian_fermion(DenseMatrix d_op, double Gamma, double W,
                                     double mu, double kT, int N,
                                     Decomposition dec = Decomposition::Pade,
                                     std::string bath_id = "",
                                     std::string channel = "");

  // Drude-Lorentz spectral density 4*Delta*W*w/(w^2+W^2); the pole term is
  // split into Real/Imag parts, the N-1 distribution poles are purely real,
  // so N+1 exponents total.
  static BathSpec drude_lorentz_boson(DenseMatrix v_op, double Delta, double W,
                                      double kT, int N,
                                      Decomposition dec = Decomposition::Pade,
                                      std::string bath_id = "",
                                      std::string channel = "");

  // User-supplied exponent lists, accepted verbatim (only Re(rate) > 0 and
  // family-shape checks). Fermionic families must have equal length; the h-th
  // entries of the two families are conjugation partners.
  static BathSpec fermionic(DenseMatrix d_op,
                            std::vector<FermionicExponent> nu_plus,
                            std::vector<FermionicExponent> nu_minus,
                            std::string bath_id = "", std::string channel = "");
  static BathSpec bosonic(DenseMatrix v_op, std::vector<BosonicExponent> exps,
                          std::string bath_id = "", std::string channel = "");

  BathFlavor flavor() const { return flavor_; }
  const DenseMatrix& coupling_op() const { return op_; }
  const std::string& bath_id() const { return bath_id_; }
  const std::string& channel() const { return channel_; }
  int sys_dim() const { return static_cast<int>(op_.rows()); }

  // Fermionic exponents, nu=+1 family followed by the nu=-1 family.
  const std::vector<FermionicExponent>& fermionic_exponents() const;
  const std::vector<BosonicExponent>& bosonic_exponents() const;
  int family_size() const;  // exponents per nu family

  // C(tau) reconstructed from the expansion. nu must be given for fermionic
  // baths and omitted for bosonic ones.
  cx correlation(double tau, std::optional<int> nu = std::nullopt) const;

 private:
  BathSpec() = default;
  BathFlavor flavor_ = BathFlavor::Bosonic;
  DenseMatrix op_;
  std::string bath_id_, channel_;
  std::vector<FermionicExponent> fexp_;  // plus family then minus family
  std::vector<BosonicExponent> bexp_;
};

// Dispatch helper mirroring the two spectral-density constructors with
// Matsubara poles. `strength` is Gamma (fermionic) or Delta (bosonic);
// mu is ignored for bosonic baths.
BathSpec matsubara_decomposition(BathFlavor flavor, DenseMatrix op,
                                 double strength, double W, double mu,
                                 double kT, int N, std::string bath_id = "",
                                 std::string channel = "");

}  // namespace heom
