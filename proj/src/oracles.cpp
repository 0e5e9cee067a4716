#include "heom/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "heom/bath.hpp"
#include "heom/observables.hpp"
#include "heom/solvers.hpp"

namespace heom::oracles {
namespace {

using boost::math::quadrature::gauss_kronrod;

double stable_fermi(double x) {
  return x > 0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
}

// w * n_B(w/kT), finite at w = 0.
double omega_bose(double w, double kT) {
  const double x = w / kT;
  if (std::abs(x) < 1e-8) return kT * (1.0 - 0.5 * x);  // x/(e^x-1) ~ 1 - x/2
  return w / std::expm1(x);
}

template <typename F>
cx integrate_complex(F&& f, double a, double b) {
  const auto re = [&](double w) { return f(w).real(); };
  const auto im = [&](double w) { return f(w).imag(); };
  const double vr = gauss_kronrod<double, 15>::integrate(re, a, b, 15, 1e-11);
  const double vi = gauss_kronrod<double, 15>::integrate(im, a, b, 15, 1e-11);
  return {vr, vi};
}

}  // namespace

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Fermi weight for complex argument; the tails only evaluate it where the
// real part of x is large, so the plain form is stable there.
cx fermi_weight(cx x, int nu) {
  if (x.real() > 0) {
    const cx e = std::exp(-x);
    return nu == +1 ? e / (1.0 + e) : 1.0 / (1.0 + e);
  }
  const cx e = std::exp(x);
  return nu == +1 ? 1.0 / (1.0 + e) : e / (1.0 + e);
}

}  // namespace

cx fermion_correlation_quadrature(double Gamma, double W, double mu, double kT,
                                  int nu, double tau) {
  const auto J = [&](cx w) {
    return Gamma * W * W / ((w - mu) * (w - mu) + W * W);
  };
  const auto f = [&](double w) -> cx {
    const double n = stable_fermi((w - mu) / kT);
    const double weight = nu == +1 ? n : 1.0 - n;
    return J(w) * weight * std::exp(cx(0.0, nu * w * tau));
  };
  const double lo = mu - 50.0 * W;
  const double hi = mu + 50.0 * W;
  cx val = integrate_complex(f, lo, hi);

  // The distribution factor cuts one side exponentially; the opposite
  // Lorentzian 1/w^2 tail is evaluated exactly on a rotated contour where the
  // phase factor decays: w = edge +- i s.
  if (nu == +1) {
    const auto tail = [&](double s) -> cx {
      const cx w(lo, s);
      return J(w) * fermi_weight((w - mu) / kT, +1) *
             std::exp(cx(-s * tau, 0.0));
    };
    val += -iu * std::exp(iu * lo * tau) * integrate_complex(tail, 0.0, kInf);
  } else {
    const auto tail = [&](double s) -> cx {
      const cx w(hi, -s);
      return J(w) * fermi_weight((w - mu) / kT, -1) *
             std::exp(cx(-s * tau, 0.0));
    };
    val += -iu * std::exp(-iu * hi * tau) * integrate_complex(tail, 0.0, kInf);
  }
  return val / (2.0 * std::numbers::pi);
}

cx boson_correlation_quadrature(double Delta, double W, double kT, double tau) {
  if (!(tau > 0.0))
    throw ParameterError(
        "boson_correlation_quadrature: the Drude-Lorentz correlation integral "
        "is log-divergent at tau = 0; evaluate at tau > 0");
  const auto J = [&](cx w) { return 4.0 * Delta * W * w / (w * w + W * W); };
  const auto f = [&](double w) -> cx {
    const double pref = 4.0 * Delta * W / (w * w + W * W);
    const double wn = omega_bose(w, kT);
    return pref * (wn * 2.0 * std::cos(w * tau) + w * std::exp(cx(0.0, -w * tau)));
  };
  // Beyond hi the Bose factor is negligible; the remaining J e^{-i w tau}
  // tail is taken down the rotated ray w = hi - i s.
  const double hi = std::max(50.0 * W, 45.0 * kT);
  cx val = integrate_complex(f, 0.0, hi);
  const auto tail = [&](double s) -> cx {
    return J(cx(hi, -s)) * std::exp(cx(-s * tau, 0.0));
  };
  val += -iu * std::exp(-iu * hi * tau) * integrate_complex(tail, 0.0, kInf);
  return val / (2.0 * std::numbers::pi);
}

namespace {

int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

// Literal left/right superoperator blocks in the column-stacking convention.
void add_left(DenseMatrix& M, Eigen::Index r0, Eigen::Index c0, int d, cx alpha,
              const DenseMatrix& a) {
  if (alpha == cx(0, 0)) return;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const cx v = alpha * a(i, k);
      if (v == cx(0, 0)) continue;
      for (int c = 0; c < d; ++c) M(r0 + c * d + i, c0 + c * d + k) += v;
    }
}

void add_right(DenseMatrix& M, Eigen::Index r0, Eigen::Index c0, int d, cx beta,
               const DenseMatrix& b) {
  if (beta == cx(0, 0)) return;
  for (int e = 0; e < d; ++e)
    for (int c = 0; c < d; ++c) {
      const cx v = beta * b(e, c);
      if (v == cx(0, 0)) continue;
      for (int i = 0; i < d; ++i) M(r0 + c * d + i, c0 + e * d + i) += v;
    }
}

}  // namespace

DenseMatrix naive_ordered_vector_heomls(const SystemSpec& system,
                                        std::shared_ptr<const HierarchySpace> space,
                                        Parity parity) {
  const ExponentTable& t = space->exponents();
  const int d = system.dim();
  const int D = d * d;
  const Eigen::Index dim = static_cast<Eigen::Index>(space->size()) * D;
  const double p = parity == Parity::Odd ? -1.0 : 1.0;

  std::vector<DenseMatrix> ops_dag;
  for (const auto& op : t.ops) ops_dag.push_back(op.adjoint());
  const auto op_pow = [&](int op, int nu) -> const DenseMatrix& {
    return nu == +1 ? ops_dag[static_cast<std::size_t>(op)]
                    : t.ops[static_cast<std::size_t>(op)];
  };

  DenseMatrix M = DenseMatrix::Zero(dim, dim);
  for (const AdoIndex& ado : space->ados()) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(ado.flat) * D;
    const int n = ado.n;

    // Paper-order vectors [v_n, ..., v_1]: element 0 is the newest index,
    // position w counts from the right.
    std::vector<int> qvec(ado.q.rbegin(), ado.q.rend());
    std::vector<int> jvec(ado.j.rbegin(), ado.j.rend());

    cx decay = 0.0;
    for (int id : ado.j) decay += t.boson[static_cast<std::size_t>(id)].chi;
    for (int id : ado.q) decay += t.fermion[static_cast<std::size_t>(id)].gamma;
    for (int r = 0; r < D; ++r) M(r0 + r, r0 + r) += -decay;
    add_left(M, r0, r0, d, -iu, system.H0);
    add_right(M, r0, r0, d, iu, system.H0);

    // Raising in the bosonic index: one term per multi-index ensemble.
    for (int jp = 0; jp < t.K_b(); ++jp) {
      std::vector<int> target = ado.j;
      target.insert(std::upper_bound(target.begin(), target.end(), jp), jp);
      if (!space->contains(target, ado.q)) continue;
      const Eigen::Index c0 =
          static_cast<Eigen::Index>(space->index_of(target, ado.q)) * D;
      const DenseMatrix& v = t.ops[static_cast<std::size_t>(t.boson[jp].op)];
      add_left(M, r0, c0, d, -iu, v);
      add_right(M, r0, c0, d, iu, v);
    }
    // Lowering in the bosonic index: explicit sum over vector positions r.
    for (std::size_t rpos = 1; rpos <= jvec.size(); ++rpos) {
      const int id = jvec[jvec.size() - rpos];  // position r from the right
      std::vector<int> target = ado.j;
      target.erase(std::find(target.begin(), target.end(), id));
      if (!space->contains(target, ado.q)) continue;
      const Eigen::Index c0 =
          static_cast<Eigen::Index>(space->index_of(target, ado.q)) * D;
      const auto& mode = t.boson[static_cast<std::size_t>(id)];
      const DenseMatrix& v = t.ops[static_cast<std::size_t>(mode.op)];
      switch (mode.part) {
        case BosonPart::Real:
          add_left(M, r0, c0, d, -iu * mode.xi, v);
          add_right(M, r0, c0, d, iu * mode.xi, v);
          break;
        case BosonPart::Imag:
          add_left(M, r0, c0, d, mode.xi, v);
          add_right(M, r0, c0, d, mode.xi, v);
          break;
        case BosonPart::Combined:
          add_left(M, r0, c0, d, -iu * mode.xi, v);
          add_right(M, r0, c0, d, iu * std::conj(mode.xi), v);
          break;
      }
    }
    // Raising in the fermionic index: prepend q', then sort the vector back
    // to the canonical descending order counting transpositions.
    for (int qp = 0; qp < t.K_f(); ++qp) {
      if (std::find(ado.q.begin(), ado.q.end(), qp) != ado.q.end()) continue;
      std::vector<int> v;
      v.push_back(qp);
      v.insert(v.end(), qvec.begin(), qvec.end());
      double sgn = 1.0;
      for (std::size_t i = 1; i < v.size(); ++i)
        for (std::size_t k = i; k > 0 && v[k] > v[k - 1]; --k) {
          std::swap(v[k], v[k - 1]);
          sgn = -sgn;
        }
      std::vector<int> target(v.rbegin(), v.rend());  // ascending set
      if (!space->contains(ado.j, target)) continue;
      const Eigen::Index c0 =
          static_cast<Eigen::Index>(space->index_of(ado.j, target)) * D;
      const auto& mode = t.fermion[static_cast<std::size_t>(qp)];
      const DenseMatrix& dbar = op_pow(mode.op, -mode.nu);
      const cx f = -iu * sgn;
      add_left(M, r0, c0, d, f * p, dbar);
      add_right(M, r0, c0, d, f * static_cast<double>(sign_pow(n + 1)), dbar);
    }
    // Lowering in the fermionic index: remove position w with (-1)^(n-w).
    for (int w = 1; w <= n; ++w) {
      const int id = qvec[static_cast<std::size_t>(n - w)];
      std::vector<int> target = ado.q;
      target.erase(std::find(target.begin(), target.end(), id));
      if (!space->contains(ado.j, target)) continue;
      const Eigen::Index c0 =
          static_cast<Eigen::Index>(space->index_of(ado.j, target)) * D;
      const auto& mode = t.fermion[static_cast<std::size_t>(id)];
      const DenseMatrix& dnu = op_pow(mode.op, mode.nu);
      const cx f = -iu * static_cast<double>(sign_pow(n - w));
      add_left(M, r0, c0, d, f * p * mode.eta, dnu);
      add_right(M, r0, c0, d,
                f * static_cast<double>(sign_pow(n)) * std::conj(mode.eta_partner),
                dnu);
    }
  }
  return M;
}

namespace {

// Ordered-vector label: bosonic and fermionic index vectors in paper order.
struct VecLabel {
  std::vector<int> jv, qv;
  bool operator<(const VecLabel& o) const {
    return std::tie(jv, qv) < std::tie(o.jv, o.qv);
  }
};

void gen_boson_vectors(int K_b, int m_max, std::vector<std::vector<int>>& out) {
  out.push_back({});
  std::vector<std::vector<int>> frontier{{}};
  for (int m = 1; m <= m_max; ++m) {
    std::vector<std::vector<int>> next;
    for (const auto& v : frontier)
      for (int id = 0; id < K_b; ++id) {
        auto w = v;
        w.insert(w.begin(), id);
        next.push_back(w);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
}

void gen_fermion_vectors(int K_f, int n_max, std::vector<std::vector<int>>& out) {
  out.push_back({});
  std::vector<std::vector<int>> frontier{{}};
  for (int n = 1; n <= n_max; ++n) {
    std::vector<std::vector<int>> next;
    for (const auto& v : frontier)
      for (int id = 0; id < K_f; ++id) {
        if (std::find(v.begin(), v.end(), id) != v.end()) continue;
        auto w = v;
        w.insert(w.begin(), id);
        next.push_back(w);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
}

double perm_sign_desc(const std::vector<int>& v) {
  double sgn = 1.0;
  std::vector<int> w = v;
  for (std::size_t i = 1; i < w.size(); ++i)
    for (std::size_t k = i; k > 0 && w[k] > w[k - 1]; --k) {
      std::swap(w[k], w[k - 1]);
      sgn = -sgn;
    }
  return sgn;
}

}  // namespace

double ordered_vector_embedding_defect(const SystemSpec& system,
                                       const std::vector<BathSpec>& baths,
                                       int m_max, int n_max, Parity parity) {
  const ExponentTable t = ExponentTable::build(baths);
  const int d = system.dim();
  const int D = d * d;
  const double p = parity == Parity::Odd ? -1.0 : 1.0;

  std::vector<std::vector<int>> jvs, qvs;
  gen_boson_vectors(t.K_b(), m_max, jvs);
  gen_fermion_vectors(t.K_f(), n_max, qvs);
  std::vector<VecLabel> labels;
  for (const auto& jv : jvs)
    for (const auto& qv : qvs) labels.push_back({jv, qv});
  std::map<VecLabel, std::size_t> pos;
  for (std::size_t i = 0; i < labels.size(); ++i) pos[labels[i]] = i;

  std::vector<DenseMatrix> ops_dag;
  for (const auto& op : t.ops) ops_dag.push_back(op.adjoint());
  const auto op_pow = [&](int op, int nu) -> const DenseMatrix& {
    return nu == +1 ? ops_dag[static_cast<std::size_t>(op)]
                    : t.ops[static_cast<std::size_t>(op)];
  };

  const Eigen::Index dim = static_cast<Eigen::Index>(labels.size()) * D;
  DenseMatrix Mv = DenseMatrix::Zero(dim, dim);
  for (std::size_t a = 0; a < labels.size(); ++a) {
    const auto& [jv, qv] = labels[a];
    const int n = static_cast<int>(qv.size());
    const Eigen::Index r0 = static_cast<Eigen::Index>(a) * D;

    cx decay = 0.0;
    for (int id : jv) decay += t.boson[static_cast<std::size_t>(id)].chi;
    for (int id : qv) decay += t.fermion[static_cast<std::size_t>(id)].gamma;
    for (int r = 0; r < D; ++r) Mv(r0 + r, r0 + r) += -decay;
    add_left(Mv, r0, r0, d, -iu, system.H0);
    add_right(Mv, r0, r0, d, iu, system.H0);

    for (int jp = 0; jp < t.K_b(); ++jp) {
      VecLabel tgt{jv, qv};
      tgt.jv.insert(tgt.jv.begin(), jp);
      const auto it = pos.find(tgt);
      if (it == pos.end()) continue;
      const Eigen::Index c0 = static_cast<Eigen::Index>(it->second) * D;
      const DenseMatrix& v = t.ops[static_cast<std::size_t>(t.boson[jp].op)];
      add_left(Mv, r0, c0, d, -iu, v);
      add_right(Mv, r0, c0, d, iu, v);
    }
    for (std::size_t idx = 0; idx < jv.size(); ++idx) {
      VecLabel tgt{jv, qv};
      tgt.jv.erase(tgt.jv.begin() + static_cast<std::ptrdiff_t>(idx));
      const auto it = pos.find(tgt);
      if (it == pos.end()) continue;
      const Eigen::Index c0 = static_cast<Eigen::Index>(it->second) * D;
      const auto& mode = t.boson[static_cast<std::size_t>(jv[idx])];
      const DenseMatrix& v = t.ops[static_cast<std::size_t>(mode.op)];
      switch (mode.part) {
        case BosonPart::Real:
          add_left(Mv, r0, c0, d, -iu * mode.xi, v);
          add_right(Mv, r0, c0, d, iu * mode.xi, v);
          break;
        case BosonPart::Imag:
          add_left(Mv, r0, c0, d, mode.xi, v);
          add_right(Mv, r0, c0, d, mode.xi, v);
          break;
        case BosonPart::Combined:
          add_left(Mv, r0, c0, d, -iu * mode.xi, v);
          add_right(Mv, r0, c0, d, iu * std::conj(mode.xi), v);
          break;
      }
    }
    for (int qp = 0; qp < t.K_f(); ++qp) {
      if (std::find(qv.begin(), qv.end(), qp) != qv.end()) continue;
      VecLabel tgt{jv, qv};
      tgt.qv.insert(tgt.qv.begin(), qp);
      const auto it = pos.find(tgt);
      if (it == pos.end()) continue;
      const Eigen::Index c0 = static_cast<Eigen::Index>(it->second) * D;
      const auto& mode = t.fermion[static_cast<std::size_t>(qp)];
      const DenseMatrix& dbar = op_pow(mode.op, -mode.nu);
      add_left(Mv, r0, c0, d, -iu * p, dbar);
      add_right(Mv, r0, c0, d, -iu * static_cast<double>(sign_pow(n + 1)), dbar);
    }
    for (int w = 1; w <= n; ++w) {
      const std::size_t idx = qv.size() - static_cast<std::size_t>(w);
      VecLabel tgt{jv, qv};
      tgt.qv.erase(tgt.qv.begin() + static_cast<std::ptrdiff_t>(idx));
      const auto it = pos.find(tgt);
      if (it == pos.end()) continue;
      const Eigen::Index c0 = static_cast<Eigen::Index>(it->second) * D;
      const auto& mode = t.fermion[static_cast<std::size_t>(qv[idx])];
      const DenseMatrix& dnu = op_pow(mode.op, mode.nu);
      const cx f = -iu * static_cast<double>(sign_pow(n - w));
      add_left(Mv, r0, c0, d, f * p * mode.eta, dnu);
      add_right(Mv, r0, c0, d,
                f * static_cast<double>(sign_pow(n)) * std::conj(mode.eta_partner),
                dnu);
    }
  }

  // Canonical-set generator over the same tiers, unfiltered.
  auto space = HierarchySpace::enumerate(t, {m_max, n_max, 0.0});
  const HeomMatrix Ms = build_heomls(system, baths, space, parity, 1);
  const DenseMatrix Mset = DenseMatrix(Ms.matrix());

  // Embedding E: vector-label rows carry the set entry times the fermionic
  // permutation sign.
  const Eigen::Index sdim = static_cast<Eigen::Index>(space->size()) * D;
  DenseMatrix E = DenseMatrix::Zero(dim, sdim);
  for (std::size_t a = 0; a < labels.size(); ++a) {
    std::vector<int> jset = labels[a].jv;
    std::vector<int> qset = labels[a].qv;
    std::sort(jset.begin(), jset.end());
    std::sort(qset.begin(), qset.end());
    const std::size_t flat = space->index_of(jset, qset);
    const double sgn = perm_sign_desc(labels[a].qv);
    for (int r = 0; r < D; ++r)
      E(static_cast<Eigen::Index>(a) * D + r,
        static_cast<Eigen::Index>(flat) * D + r) = sgn;
  }

  return (Mv * E - E * Mset).cwiseAbs().maxCoeff();
}

double resonant_level_dos(double eps, const std::vector<double>& Gamma,
                          const std::vector<double>& W,
                          const std::vector<double>& mu, double omega) {
  cx sigma = 0.0;
  for (std::size_t a = 0; a < Gamma.size(); ++a)
    sigma += 0.5 * Gamma[a] * W[a] / cx(omega - mu[a], W[a]);
  const cx g = 1.0 / (omega - eps - sigma);
  return -g.imag() / std::numbers::pi;
}

double dephasing_exponent(double Delta, double W, double kT, double t) {
  const auto integrand = [&](double s) {
    return (t - s) * boson_correlation_quadrature(Delta, W, kT, s).real();
  };
  const double val =
      gauss_kronrod<double, 15>::integrate(integrand, 0.0, t, 12, 1e-10);
  return 4.0 * val;
}

// ---------------------------------------------------------------------------
// Named suites.

namespace {

DenseMatrix lowering2() {
  DenseMatrix d(2, 2);
  d << 0, 1, 0, 0;
  return d;
}

SuiteResult pade_suite(BathFlavor flavor) {
  std::ostringstream detail;
  bool pass = true;
  const DenseMatrix op = lowering2();
  const DenseMatrix herm = op + DenseMatrix(op.adjoint());

  if (flavor == BathFlavor::Fermionic) {
    const double Gamma = 1, W = 10, kT = 0.5;
    for (double mu : {0.0, 1.0}) {
      const auto bath = BathSpec::lorentzian_fermion(op, Gamma, W, mu, kT, 7);
      for (int nu : {+1, -1}) {
        const double c0 =
            std::abs(fermion_correlation_quadrature(Gamma, W, mu, kT, nu, 0.0));
        double worst = 0.0;
        for (double tau = 0.0; tau <= 1.0001; tau += 0.05) {
          const cx ref = fermion_correlation_quadrature(Gamma, W, mu, kT, nu, tau);
          worst = std::max(worst, std::abs(bath.correlation(tau, nu) - ref) / c0);
        }
        detail << "mu=" << mu << " nu=" << nu << " relerr=" << worst << "; ";
        pass = pass && worst < 1e-4;
      }
    }
  } else {
    const double Delta = 0.01, W = 0.2, kT = 0.5;
    const auto bath = BathSpec::drude_lorentz_boson(herm, Delta, W, kT, 5);
    const double c0 = std::abs(boson_correlation_quadrature(Delta, W, kT, 2.5));
    double worst = 0.0;
    for (double tau = 2.5; tau <= 50.0001; tau += 2.5) {
      const cx ref = boson_correlation_quadrature(Delta, W, kT, tau);
      worst = std::max(worst, std::abs(bath.correlation(tau) - ref) / c0);
    }
    detail << "relerr=" << worst << "; ";
    pass = pass && worst < 1e-4;
  }
  return {flavor == BathFlavor::Fermionic ? "pade-fermi" : "pade-bose", pass,
          detail.str()};
}

SuiteResult matsubara_suite() {
  std::ostringstream detail;
  bool pass = true;
  const DenseMatrix op = lowering2();
  const DenseMatrix herm = op + DenseMatrix(op.adjoint());

  {  // fermionic, Table-1 parameters
    const double Gamma = 1, W = 10, mu = 0, kT = 0.5;
    double prev = 1e300;
    for (int N : {2, 5, 10, 20}) {
      const auto bath = matsubara_decomposition(BathFlavor::Fermionic, op,
                                                Gamma, W, mu, kT, N);
      const double c0 =
          std::abs(fermion_correlation_quadrature(Gamma, W, mu, kT, +1, 0.0));
      double worst = 0.0;
      for (double tau = 0.05; tau <= 1.0001; tau += 0.05) {
        const cx ref = fermion_correlation_quadrature(Gamma, W, mu, kT, +1, tau);
        worst = std::max(worst, std::abs(bath.correlation(tau, +1) - ref) / c0);
      }
      detail << "f N=" << N << " err=" << worst << "; ";
      pass = pass && worst <= prev * (1 + 1e-12);
      prev = worst;
    }
  }
  {  // bosonic
    const double Delta = 0.01, W = 0.2, kT = 0.5;
    double prev = 1e300;
    for (int N : {2, 5, 10, 20}) {
      const auto bath = matsubara_decomposition(BathFlavor::Bosonic, herm,
                                                Delta, W, 0.0, kT, N);
      const double c0 = std::abs(boson_correlation_quadrature(Delta, W, kT, 2.5));
      double worst = 0.0;
      for (double tau = 2.5; tau <= 50.0001; tau += 2.5) {
        const cx ref = boson_correlation_quadrature(Delta, W, kT, tau);
        worst = std::max(worst, std::abs(bath.correlation(tau) - ref) / c0);
      }
      detail << "b N=" << N << " err=" << worst << "; ";
      pass = pass && worst <= prev * (1 + 1e-12);
      prev = worst;
    }
  }
  return {"matsubara", pass, detail.str()};
}

std::vector<BathSpec> toy_fermion_baths(int exps_per_family, double mu) {
  std::vector<FermionicExponent> plus, minus;
  for (int h = 1; h <= exps_per_family; ++h) {
    plus.push_back({cx(0.3 / h, 0.05 * h), cx(0.8 * h, -mu), +1});
    minus.push_back({cx(0.25 / h, -0.04 * h), cx(0.8 * h, mu), -1});
  }
  return {BathSpec::fermionic(lowering2(), plus, minus, "T", "d")};
}

std::vector<BathSpec> toy_boson_baths(int n_exps) {
  DenseMatrix v(2, 2);
  v << 0.2, 0.7, 0.7, -0.4;
  std::vector<BosonicExponent> exps;
  for (int l = 1; l <= n_exps; ++l) {
    if (l == 1) {
      exps.push_back({cx(0.4, 0), cx(0.5, 0), BosonPart::Real});
      exps.push_back({cx(-0.15, 0), cx(0.5, 0), BosonPart::Imag});
    } else {
      exps.push_back({cx(0.1 / l, 0.02), cx(0.6 * l, 0), BosonPart::Combined});
    }
  }
  return {BathSpec::bosonic(v, exps, "B", "v")};
}

SystemSpec toy_system() {
  DenseMatrix h(2, 2);
  h << 0.3, cx(0.1, 0.2), cx(0.1, -0.2), -0.5;
  return SystemSpec::constant(h);
}

SuiteResult generator_suite() {
  std::ostringstream detail;
  bool pass = true;
  const SystemSpec sys = toy_system();

  struct Case {
    std::vector<BathSpec> baths;
    int m_max, n_max;
    const char* name;
  };
  std::vector<Case> cases;
  cases.push_back({toy_fermion_baths(3, 0.4), 0, 2, "fermi6"});
  cases.push_back({toy_boson_baths(3), 2, 0, "bose3"});
  {
    auto mixed = toy_fermion_baths(2, 0.2);
    auto bos = toy_boson_baths(2);
    mixed.insert(mixed.end(), bos.begin(), bos.end());
    cases.push_back({mixed, 2, 2, "hybrid"});
  }

  for (const auto& cse : cases) {
    for (Parity par : {Parity::Even, Parity::Odd}) {
      if (par == Parity::Odd &&
          ExponentTable::build(cse.baths).K_f() == 0)
        continue;
      auto space = HierarchySpace::enumerate(ExponentTable::build(cse.baths),
                                             {cse.m_max, cse.n_max, 0.0});
      const HeomMatrix M = build_heomls(sys, cse.baths, space, par, 1);
      const DenseMatrix naive = naive_ordered_vector_heomls(sys, space, par);
      const DenseMatrix diff = DenseMatrix(M.matrix()) - naive;
      const double maxdiff = diff.cwiseAbs().maxCoeff();
      detail << cse.name << (par == Parity::Odd ? "/odd" : "/even")
             << " maxdiff=" << maxdiff << "; ";
      pass = pass && maxdiff == 0.0;
    }
  }
  return {"generator", pass, detail.str()};
}

SuiteResult embedding_suite() {
  std::ostringstream detail;
  bool pass = true;
  const SystemSpec sys = toy_system();
  {
    const double defect = ordered_vector_embedding_defect(
        sys, toy_fermion_baths(2, 0.3), 0, 2, Parity::Even);
    detail << "fermi defect=" << defect << "; ";
    pass = pass && defect < 1e-13;
  }
  {
    const double defect = ordered_vector_embedding_defect(
        sys, toy_boson_baths(2), 2, 0, Parity::Even);
    detail << "bose defect=" << defect << "; ";
    pass = pass && defect < 1e-13;
  }
  {
    auto mixed = toy_fermion_baths(2, 0.1);
    auto bos = toy_boson_baths(2);
    mixed.insert(mixed.end(), bos.begin(), bos.end());
    const double defect =
        ordered_vector_embedding_defect(sys, mixed, 1, 2, Parity::Odd);
    detail << "hybrid/odd defect=" << defect << "; ";
    pass = pass && defect < 1e-13;
  }
  return {"embedding", pass, detail.str()};
}

SuiteResult resonant_level_suite() {
  const double eps = -2.0, Gamma = 1.0, W = 10.0, mu = 1.0, kT = 0.5;
  const int N = 7;
  DenseMatrix d_op = lowering2();
  DenseMatrix h = DenseMatrix::Zero(2, 2);
  h(1, 1) = eps;

  std::vector<BathSpec> baths{
      BathSpec::lorentzian_fermion(d_op, Gamma, W, mu, kT, N, Decomposition::Pade,
                                   "L", "d")};
  auto space = HierarchySpace::enumerate(ExponentTable::build(baths), {0, 2, 0.0});
  const SystemSpec sys = SystemSpec::constant(h);
  const HeomMatrix M_even = build_heomls(sys, baths, space, Parity::Even, 1);
  const HeomMatrix M_odd = build_heomls(sys, baths, space, Parity::Odd, 1);
  const AdosVector ss = steadystate(M_even);

  std::vector<double> grid;
  for (double w = -20.0; w <= 20.0001; w += 0.25) grid.push_back(w);
  const SpectrumResult s = dos(M_odd, ss, d_op, grid);

  double ref_max = 0.0, err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ref = resonant_level_dos(eps, {Gamma}, {W}, {mu}, grid[i]);
    ref_max = std::max(ref_max, std::abs(ref));
    err = std::max(err, std::abs(s.value[i] - ref));
  }
  std::ostringstream detail;
  detail << "sup-err=" << err << " sup-ref=" << ref_max
         << " rel=" << err / ref_max;
  return {"resonant-level", err / ref_max < 0.01, detail.str()};
}

SuiteResult dephasing_suite() {
  const double eps = 1.0, Delta = 0.01, W = 0.2, kT = 0.5;
  DenseMatrix sz(2, 2);
  sz << 1, 0, 0, -1;
  DenseMatrix h = 0.5 * eps * sz;

  std::vector<BathSpec> baths{
      BathSpec::drude_lorentz_boson(sz, Delta, W, kT, 5, Decomposition::Pade, "B")};
  auto space = HierarchySpace::enumerate(ExponentTable::build(baths), {6, 0, 0.0});
  const HeomMatrix M = build_heomls(SystemSpec::constant(h), baths, space,
                                    Parity::Even, 1);

  DenseMatrix rho0(2, 2);
  rho0 << 0.5, 0.5, 0.5, 0.5;
  const AdosVector x0 = AdosVector::from_reduced(rho0, space);
  std::vector<double> t_list;
  for (double t = 0.0; t <= 10.0001; t += 1.0) t_list.push_back(t);
  const auto traj = evolve_ode(M, x0, t_list);

  double err = 0.0;
  for (std::size_t i = 1; i < t_list.size(); ++i) {
    const double model = std::abs(traj[i].root()(0, 1));
    const double exact = 0.5 * std::exp(-dephasing_exponent(Delta, W, kT, t_list[i]));
    err = std::max(err, std::abs(model - exact));
  }
  std::ostringstream detail;
  detail << "max abs err=" << err;
  return {"dephasing", err < 1e-3, detail.str()};
}

SuiteResult gibbs_suite() {
  const double w0 = 1.0, kT = 0.5, rate = 0.3;
  DenseMatrix h = DenseMatrix::Zero(2, 2);
  h(1, 1) = w0;
  const double nbar = 1.0 / std::expm1(w0 / kT);

  auto space = HierarchySpace::enumerate(ExponentTable::build({}), {0, 0, 0.0});
  HeomMatrix M = build_heomls(SystemSpec::constant(h), {}, space, Parity::Even, 1);
  DenseMatrix sm = lowering2();
  M.add_lindblad(std::sqrt(rate * (nbar + 1.0)) * sm);
  M.add_lindblad(std::sqrt(rate * nbar) * DenseMatrix(sm.adjoint()));

  const AdosVector ss = steadystate(M);
  const DenseMatrix rho = reduced_density(ss);
  const double z = 1.0 + std::exp(-w0 / kT);
  const double err = std::max(std::abs(rho(0, 0).real() - 1.0 / z),
                              std::abs(rho(1, 1).real() - std::exp(-w0 / kT) / z));
  std::ostringstream detail;
  detail << "max pop err=" << err;
  return {"gibbs", err < 1e-8, detail.str()};
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"pade-fermi", "pade-bose", "matsubara",      "generator",
          "embedding",  "gibbs",     "resonant-level", "dephasing"};
}

SuiteResult run_suite(const std::string& name) {
  if (name == "pade-fermi") return pade_suite(BathFlavor::Fermionic);
  if (name == "pade-bose") return pade_suite(BathFlavor::Bosonic);
  if (name == "matsubara") return matsubara_suite();
  if (name == "generator") return generator_suite();
  if (name == "embedding") return embedding_suite();
  if (name == "resonant-level") return resonant_level_suite();
  if (name == "dephasing") return dephasing_suite();
  if (name == "gibbs") return gibbs_suite();
  throw NotFoundError("oracle: unknown suite '" + name + "'");
}

}  // namespace heom::oracles
