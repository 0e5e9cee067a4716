#include "heom/observables.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <thread>

namespace heom {
namespace {

// Applies op to every ADO block of the stacked state (left multiplication).
Vector stacked_left_apply(const AdosVector& ados, const DenseMatrix& op) {
  const int d = ados.sys_dim;
  const int D = d * d;
  const std::size_t n = ados.space->size();
  Vector out(ados.data.size());
  for (std::size_t a = 0; a < n; ++a) {
    const auto seg = ados.data.segment(static_cast<Eigen::Index>(a) * D, D);
    Eigen::Map<const DenseMatrix> blk(seg.data(), d, d);
    DenseMatrix prod = op * blk;
    out.segment(static_cast<Eigen::Index>(a) * D, D) =
        Eigen::Map<const Vector>(prod.data(), D);
  }
  return out;
}

cx root_trace_with(const Vector& x, const DenseMatrix& op, int d) {
  Eigen::Map<const DenseMatrix> root(x.data(), d, d);
  return (op * root).trace();
}

template <typename PerOmega>
void grid_parallel(std::size_t npts, int threads, PerOmega&& body) {
  const int nt = std::max(1, threads);
  if (nt == 1 || npts < 2) {
    for (std::size_t i = 0; i < npts; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < npts; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw ParameterError("spectrum: empty frequency grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw ParameterError("spectrum: frequency grid must be strictly increasing");
}

}  // namespace

DenseMatrix reduced_density(const AdosVector& ados) {
  if (ados.parity != Parity::Even)
    throw UsageError("reduced_density: defined in the even parity sector");
  return ados.root();
}

cx expectation(const AdosVector& ados, const DenseMatrix& op) {
  if (op.rows() != ados.sys_dim || op.cols() != ados.sys_dim)
    throw ParameterError("expectation: operator dimension mismatch");
  return root_trace_with(ados.data, op, ados.sys_dim);
}

SpectrumResult dos(const HeomMatrix& M_odd, const AdosVector& steady,
                   const DenseMatrix& d_op, const std::vector<double>& omega_grid,
                   const SpectrumOptions& opt) {
  if (M_odd.parity() != Parity::Odd)
    throw UsageError("dos: generator must be built in the odd parity sector");
  if (steady.parity != Parity::Even)
    throw UsageError("dos: steady state must come from the even sector");
  if (steady.data.size() != M_odd.dim())
    throw ParameterError("dos: steady state does not match the generator");
  check_grid(omega_grid);

  const int d = M_odd.sys_dim();
  const DenseMatrix d_dag = d_op.adjoint();
  const Vector b_plus = stacked_left_apply(steady, d_dag);
  const Vector b_minus = stacked_left_apply(steady, d_op);

  SpectrumResult res;
  res.kind = SpectrumKind::DOS;
  res.omega = omega_grid;
  res.value.assign(omega_grid.size(), 0.0);
  std::vector<double> residuals(omega_grid.size(), 0.0);

  grid_parallel(omega_grid.size(), opt.threads, [&](std::size_t i) {
    const double w = omega_grid[i];
    SolveReport rp, rm;
    const Vector xp = shifted_solve(M_odd, w, +1, b_plus, opt.linear, &rp);
    const Vector xm = shifted_solve(M_odd, w, -1, b_minus, opt.linear, &rm);
    const cx tr = root_trace_with(xp, d_op, d) + root_trace_with(xm, d_dag, d);
    res.value[i] = -tr.real() / std::numbers::pi;
    residuals[i] = std::max(rp.residual, rm.residual);
  });
  res.max_residual = *std::max_element(residuals.begin(), residuals.end());
  return res;
}

SpectrumResult psd(const HeomMatrix& M_even, const AdosVector& steady,
                   const DenseMatrix& a_op, const std::vector<double>& omega_grid,
                   const SpectrumOptions& opt) {
  if (M_even.parity() != Parity::Even)
    throw UsageError("psd: generator must be built in the even parity sector");
  if (steady.data.size() != M_even.dim())
    throw ParameterError("psd: steady state does not match the generator");
  check_grid(omega_grid);

  const int d = M_even.sys_dim();
  const DenseMatrix a_dag = a_op.adjoint();
  const Vector b = stacked_left_apply(steady, a_op);

  SpectrumResult res;
  res.kind = SpectrumKind::PSD;
  res.omega = omega_grid;
  res.value.assign(omega_grid.size(), 0.0);
  std::vector<double> residuals(omega_grid.size(), 0.0);

  grid_parallel(omega_grid.size(), opt.threads, [&](std::size_t i) {
    SolveReport rep;
    const Vector x = shifted_solve(M_even, omega_grid[i], -1, b, opt.linear, &rep);
    res.value[i] = -root_trace_with(x, a_dag, d).real() / std::numbers::pi;
    residuals[i] = rep.residual;
  });
  res.max_residual = *std::max_element(residuals.begin(), residuals.end());
  return res;
}

CurrentResult current(const AdosVector& ados, const std::string& bath_id,
                      double phi) {
  if (ados.parity != Parity::Even)
    throw UsageError("current: even-sector state required");
  const HierarchySpace& space = *ados.space;
  const ExponentTable& table = space.exponents();

  bool bath_known = false;
  for (std::size_t b = 0; b < table.bath_ids.size(); ++b)
    if (table.flavors[b] == BathFlavor::Fermionic && table.bath_ids[b] == bath_id)
      bath_known = true;
  if (!bath_known)
    throw NotFoundError("current: unknown fermionic bath id '" + bath_id + "'");

  // I = i e sum_{nu,h,channel} (-1)^{delta_{nu,-}} Tr[d^{nubar} rho^{(0,1)}_q].
  cx acc = 0.0;
  const int d = ados.sys_dim;
  const int D = d * d;
  for (const AdoIndex& ado : space.ados()) {
    if (!(ado.m == 0 && ado.n == 1)) continue;
    const auto& mode = table.fermion[static_cast<std::size_t>(ado.q[0])];
    if (table.bath_ids[static_cast<std::size_t>(mode.bath)] != bath_id) continue;
    const DenseMatrix& op = table.ops[static_cast<std::size_t>(mode.op)];
    const DenseMatrix dbar = mode.nu == +1 ? op : DenseMatrix(op.adjoint());
    const double sign = mode.nu == -1 ? -1.0 : 1.0;
    const auto seg = ados.data.segment(static_cast<Eigen::Index>(ado.flat) * D, D);
    Eigen::Map<const DenseMatrix> blk(seg.data(), d, d);
    acc += sign * (dbar * blk).trace();
  }
  CurrentResult out;
  out.bath_id = bath_id;
  out.phi = phi;
  out.value = (iu * acc).real();
  return out;
}

std::vector<std::pair<double, double>> conductance(
    const std::vector<double>& phi_grid, const std::vector<double>& currents) {
  if (phi_grid.size() != currents.size())
    throw ParameterError("conductance: grid/current length mismatch");
  if (phi_grid.size() < 3)
    throw ParameterError("conductance: need at least 3 bias points");
  const double h = phi_grid[1] - phi_grid[0];
  for (std::size_t i = 1; i < phi_grid.size(); ++i)
    if (std::abs((phi_grid[i] - phi_grid[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw ParameterError("conductance: bias grid must be uniform");

  std::vector<std::pair<double, double>> out(phi_grid.size());
  const std::size_t n = phi_grid.size();
  out[0] = {phi_grid[0], (currents[1] - currents[0]) / h};
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = {phi_grid[i], (currents[i + 1] - currents[i - 1]) / (2 * h)};
  out[n - 1] = {phi_grid[n - 1], (currents[n - 1] - currents[n - 2]) / h};
  return out;
}

void write_spectrum_csv(const std::string& path, const SpectrumResult& s) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw SolverError("write_spectrum_csv: cannot open " + path);
  std::fprintf(f, "omega,value\n");
  for (std::size_t i = 0; i < s.omega.size(); ++i)
    std::fprintf(f, "%.12g,%.12g\n", s.omega[i], s.value[i]);
  std::fclose(f);
}

void write_sweep_csv(const std::string& path, const std::vector<double>& phi,
                     const std::vector<double>& current,
                     const std::vector<double>& conductance) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw SolverError("write_sweep_csv: cannot open " + path);
  std::fprintf(f, "phi,current,conductance\n");
  for (std::size_t i = 0; i < phi.size(); ++i)
    std::fprintf(f, "%.12g,%.12g,%.12g\n", phi[i], current[i], conductance[i]);
  std::fclose(f);
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<double>& t_list,
                          const std::vector<std::string>& names,
                          const std::vector<std::vector<cx>>& values) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw SolverError("write_trajectory_csv: cannot open " + path);
  std::fprintf(f, "t");
  for (const auto& n : names) std::fprintf(f, ",re(%s),im(%s)", n.c_str(), n.c_str());
  std::fprintf(f, "\n");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    std::fprintf(f, "%.12g", t_list[i]);
    for (std::size_t k = 0; k < names.size(); ++k)
      std::fprintf(f, ",%.12g,%.12g", values[k][i].real(), values[k][i].imag());
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace heom
