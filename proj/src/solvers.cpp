#include "heom/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <variant>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

namespace heom {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double error_norm(const Vector& err, const Vector& a, const Vector& b,
                  double rtol, double atol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale =
        atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    const double e = std::abs(err[i]) / scale;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

AdosVector AdosVector::from_reduced(const DenseMatrix& rho0,
                                    std::shared_ptr<const HierarchySpace> space,
                                    Parity parity) {
  if (!space) throw UsageError("ados: null hierarchy space");
  const int d = space->sys_dim() > 0 ? space->sys_dim()
                                     : static_cast<int>(rho0.rows());
  if (rho0.rows() != d || rho0.cols() != d)
    throw ParameterError("ados: initial density matrix dimension mismatch");
  AdosVector v;
  v.space = std::move(space);
  v.parity = parity;
  v.sys_dim = d;
  v.data = Vector::Zero(static_cast<Eigen::Index>(v.space->size()) * d * d);
  v.data.head(d * d) = vectorize(rho0);
  return v;
}

DenseMatrix AdosVector::block(std::size_t flat) const {
  const int D = sys_dim * sys_dim;
  if (flat >= space->size()) throw NotFoundError("ados: flat index out of range");
  return unvectorize(data.segment(static_cast<Eigen::Index>(flat) * D, D), sys_dim);
}

std::vector<AdosVector> evolve_ode(const HeomMatrix& M, const AdosVector& x0,
                                   const std::vector<double>& t_list,
                                   const OdeOptions& opt, SolveReport* report) {
  if (t_list.empty()) throw ParameterError("evolve_ode: empty time list");
  for (std::size_t i = 1; i < t_list.size(); ++i)
    if (!(t_list[i] > t_list[i - 1]))
      throw ParameterError("evolve_ode: t_list must be strictly increasing");
  if (x0.data.size() != M.dim())
    throw ParameterError("evolve_ode: state dimension mismatch");

  const auto t_start = Clock::now();

  // Dormand-Prince 5(4) tableau.
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = t_list.front();
  Vector x = x0.data;
  std::vector<AdosVector> out;
  out.reserve(t_list.size());
  auto emit = [&](const Vector& v) {
    AdosVector a = x0;
    a.data = v;
    out.push_back(std::move(a));
  };
  emit(x);

  Vector k1 = M.apply(x, t);
  double dt = opt.dt_init;
  if (dt <= 0.0) {
    const double xn = std::max(x.norm(), 1e-30);
    const double fn = std::max(k1.norm(), 1e-30);
    dt = 0.01 * xn / fn;
    dt = std::min(dt, t_list.back() - t_list.front());
  }

  long accepted = 0;
  long total_steps = 0;
  double err_last = 0.0;
  std::size_t next_out = 1;

  while (next_out < t_list.size()) {
    if (++total_steps > opt.max_steps)
      throw SolverError("evolve_ode: step limit exceeded");
    const double t_target = t_list[next_out];
    bool hit_output = false;
    if (t + dt >= t_target - 1e-14 * std::abs(t_target)) {
      dt = t_target - t;
      hit_output = true;
    }
    if (!(dt > std::abs(t) * 1e-14 + 1e-300))
      throw SolverError(
          "evolve_ode: step size underflow (stiff problem); consider the "
          "propagator method or tighter hierarchy tiers");

    const Vector k2 = M.apply(x + dt * (a21 * k1), t + c2 * dt);
    const Vector k3 = M.apply(x + dt * (a31 * k1 + a32 * k2), t + c3 * dt);
    const Vector k4 = M.apply(x + dt * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * dt);
    const Vector k5 = M.apply(
        x + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * dt);
    const Vector k6 = M.apply(
        x + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t + dt);
    const Vector x5 = x + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vector k7 = M.apply(x5, t + dt);
    const Vector err_v =
        dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double err = error_norm(err_v, x, x5, opt.rtol, opt.atol);
    if (err <= 1.0) {
      t += dt;
      x = x5;
      k1 = k7;  // FSAL
      ++accepted;
      err_last = err;
      if (hit_output) {
        emit(x);
        ++next_out;
      }
    }
    // PI step-size control.
    const double safety = 0.9;
    double factor = err > 0 ? safety * std::pow(err, -0.2) : 5.0;
    factor = std::clamp(factor, 0.2, 5.0);
    dt *= factor;
  }

  if (report) {
    report->method = "dopri5";
    report->steps = accepted;
    report->residual = err_last;
    report->wall_seconds = seconds_since(t_start);
  }
  return out;
}

namespace {

// Sparse/dense hybrid single-step propagator.
struct Propagator {
  std::variant<SparseMatrix, DenseMatrix> P;
  Vector apply(const Vector& x) const {
    if (std::holds_alternative<SparseMatrix>(P))
      return std::get<SparseMatrix>(P) * x;
    return std::get<DenseMatrix>(P) * x;
  }
};

void prune_sparse(SparseMatrix& a, double drop_tol) {
  if (drop_tol <= 0) return;
  double max_abs = 0.0;
  for (Eigen::Index r = 0; r < a.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(a, r); it; ++it)
      max_abs = std::max(max_abs, std::abs(it.value()));
  const double thr = drop_tol * max_abs;
  a.prune([thr](Eigen::Index, Eigen::Index, const cx& v) {
    return std::abs(v) > thr;
  });
}

Propagator expm_sparse(const SparseMatrix& m, double dt, const ExpmOptions& opt) {
  const Eigen::Index dim = m.rows();
  SparseMatrix a = m * cx(dt, 0.0);

  // Scale so ||A/2^s||_inf <= 0.5, Taylor-sum, then square s times.
  double norm = 0.0;
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(a, r); it; ++it)
      row += std::abs(it.value());
    norm = std::max(norm, row);
  }
  int s = 0;
  while (norm > 0.5) {
    norm /= 2;
    ++s;
  }
  if (s > 0) a = a * cx(std::ldexp(1.0, -s), 0.0);

  SparseMatrix ident(dim, dim);
  ident.setIdentity();

  SparseMatrix p = ident;
  SparseMatrix term = ident;
  for (int k = 1; k <= 30; ++k) {
    term = (term * a).pruned();
    term = term * cx(1.0 / k, 0.0);
    prune_sparse(term, opt.drop_tol * 1e-2);
    p = p + term;
    double tmax = 0.0;
    for (Eigen::Index r = 0; r < term.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(term, r); it; ++it)
        tmax = std::max(tmax, std::abs(it.value()));
    if (tmax < 1e-18) break;
  }
  prune_sparse(p, opt.drop_tol);

  const double full = static_cast<double>(dim) * static_cast<double>(dim);
  bool dense = static_cast<double>(p.nonZeros()) > opt.densify_fill * full;
  if (dense) {
    DenseMatrix pd = DenseMatrix(p);
    for (int i = 0; i < s; ++i) pd = pd * pd;
    return Propagator{std::move(pd)};
  }
  for (int i = 0; i < s; ++i) {
    p = (p * p).pruned();
    prune_sparse(p, opt.drop_tol);
    if (static_cast<double>(p.nonZeros()) > opt.densify_fill * full) {
      DenseMatrix pd = DenseMatrix(p);
      for (int k = i + 1; k < s; ++k) pd = pd * pd;
      return Propagator{std::move(pd)};
    }
  }
  return Propagator{std::move(p)};
}

}  // namespace

SparseMatrix sparse_expm(const SparseMatrix& m, double dt, const ExpmOptions& opt) {
  const Propagator p = expm_sparse(m, dt, opt);
  if (std::holds_alternative<SparseMatrix>(p.P))
    return std::get<SparseMatrix>(p.P);
  return std::get<DenseMatrix>(p.P).sparseView();
}

std::vector<AdosVector> evolve_expm(const HeomMatrix& M, const AdosVector& x0,
                                    const std::vector<double>& t_list,
                                    const ExpmOptions& opt, SolveReport* report) {
  if (M.time_dependent())
    throw UsageError("evolve_expm: propagator method requires time-independent M");
  if (t_list.size() < 2) throw ParameterError("evolve_expm: need at least two times");
  const double dt = t_list[1] - t_list[0];
  for (std::size_t i = 1; i < t_list.size(); ++i) {
    const double step = t_list[i] - t_list[i - 1];
    if (std::abs(step - dt) > 1e-10 * std::max(1.0, std::abs(dt)))
      throw ParameterError("evolve_expm: t_list must be uniformly spaced");
  }
  if (x0.data.size() != M.dim())
    throw ParameterError("evolve_expm: state dimension mismatch");

  const auto t_start = Clock::now();
  const Propagator P = expm_sparse(M.matrix(), dt, opt);

  std::vector<AdosVector> out;
  out.reserve(t_list.size());
  AdosVector cur = x0;
  out.push_back(cur);
  for (std::size_t i = 1; i < t_list.size(); ++i) {
    cur.data = P.apply(cur.data);
    out.push_back(cur);
  }
  if (report) {
    report->method = "expm";
    report->steps = static_cast<long>(t_list.size()) - 1;
    report->residual = 0.0;
    report->wall_seconds = seconds_since(t_start);
  }
  return out;
}

namespace {

double apply_residual(const HeomMatrix& M, const Vector& x, const Vector& rhs,
                      double shift_re, double shift_im) {
  Vector r = M.matrix() * x;
  if (shift_re != 0.0 || shift_im != 0.0) r += cx(shift_re, shift_im) * x;
  r -= rhs;
  const double xn = x.cwiseAbs().maxCoeff();
  return xn > 0 ? r.cwiseAbs().maxCoeff() / xn : r.cwiseAbs().maxCoeff();
}

Vector solve_col(const SparseMatrixCol& A, const Vector& b,
                 const LinearOptions& opt, long* iters) {
  if (opt.method == LinearOptions::Method::DirectLU) {
    Eigen::SparseLU<SparseMatrixCol> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
      throw SolverError("linear solve: sparse LU factorization failed "
                        "(singular or degenerate system)");
    if (iters) *iters = 1;
    return lu.solve(b);
  }
  Eigen::GMRES<SparseMatrixCol, Eigen::IncompleteLUT<cx>> gmres;
  gmres.setTolerance(opt.tol);
  gmres.setMaxIterations(opt.max_iterations);
  gmres.set_restart(opt.restart);
  gmres.compute(A);
  Vector x = gmres.solve(b);
  if (iters) *iters = gmres.iterations();
  if (gmres.info() != Eigen::Success)
    throw SolverError("linear solve: GMRES did not converge (error " +
                      std::to_string(gmres.error()) + ")");
  return x;
}

}  // namespace

AdosVector steadystate(const HeomMatrix& M, const LinearOptions& opt,
                       SolveReport* report) {
  if (M.time_dependent())
    throw UsageError("steadystate: requires a time-independent generator");
  if (M.parity() != Parity::Even)
    throw UsageError("steadystate: defined in the even parity sector");
  const auto t_start = Clock::now();
  const int d = M.sys_dim();
  const Eigen::Index dim = M.dim();

  // Copy with row 0 (root-block element (0,0)) replaced by the trace row.
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(M.matrix().nonZeros()) + d);
  for (Eigen::Index r = 0; r < M.matrix().outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(M.matrix(), r); it; ++it)
      if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < d; ++i)
    trip.emplace_back(0, static_cast<Eigen::Index>(i) * d + i, cx(1.0, 0.0));
  SparseMatrixCol A(dim, dim);
  A.setFromTriplets(trip.begin(), trip.end());

  Vector b = Vector::Zero(dim);
  b[0] = 1.0;

  long iters = 0;
  Vector x = solve_col(A, b, opt, &iters);
  if (!x.allFinite())
    throw SolverError("steadystate: singular replaced system "
                      "(degenerate steady states?)");

  AdosVector out;
  out.space = M.space();
  out.parity = M.parity();
  out.sys_dim = d;
  out.data = std::move(x);
  if (report) {
    report->method = opt.method == LinearOptions::Method::DirectLU ? "lu" : "gmres";
    report->steps = iters;
    report->residual = apply_residual(M, out.data, Vector::Zero(dim), 0, 0);
    report->wall_seconds = seconds_since(t_start);
  }
  return out;
}

Vector shifted_solve(const HeomMatrix& M, double omega, int sign,
                     const Vector& b, const LinearOptions& opt,
                     SolveReport* report) {
  if (sign != 1 && sign != -1) throw UsageError("shifted_solve: sign must be +1/-1");
  if (b.size() != M.dim()) throw ParameterError("shifted_solve: rhs length mismatch");
  const auto t_start = Clock::now();
  const double shift = sign * omega;

  SparseMatrixCol A = M.matrix();
  SparseMatrixCol ident(A.rows(), A.cols());
  ident.setIdentity();
  A = A + SparseMatrixCol(ident * cx(0.0, shift));

  long iters = 0;
  Vector x = solve_col(A, b, opt, &iters);
  if (!x.allFinite()) throw SolverError("shifted_solve: solver breakdown");
  if (report) {
    report->method = opt.method == LinearOptions::Method::DirectLU ? "lu" : "gmres";
    report->steps = iters;
    report->residual = apply_residual(M, x, b, 0.0, shift);
    report->wall_seconds = seconds_since(t_start);
  }
  return x;
}

void write_ados_binary(const std::string& path,
                       const std::vector<double>& t_list,
                       const std::vector<AdosVector>& trajectory) {
  if (t_list.size() != trajectory.size())
    throw ParameterError("write_ados_binary: time/trajectory length mismatch");
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw SolverError("write_ados_binary: cannot open " + path);
  char magic[16] = {'H', 'E', 'O', 'M', 'A', 'D', 'O', 'S', '\0'};
  std::fwrite(magic, 1, 16, f);
  const std::uint32_t version = 1;
  std::fwrite(&version, sizeof(version), 1, f);
  const std::uint64_t n_ado = trajectory.empty() ? 0 : trajectory[0].space->size();
  const std::uint64_t d = trajectory.empty() ? 0 : trajectory[0].sys_dim;
  const std::uint64_t nt = t_list.size();
  std::fwrite(&n_ado, sizeof(n_ado), 1, f);
  std::fwrite(&d, sizeof(d), 1, f);
  std::fwrite(&nt, sizeof(nt), 1, f);
  for (std::size_t i = 0; i < nt; ++i) {
    std::fwrite(&t_list[i], sizeof(double), 1, f);
    const Vector& v = trajectory[i].data;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const double re = v[k].real(), im = v[k].imag();
      std::fwrite(&re, sizeof(double), 1, f);
      std::fwrite(&im, sizeof(double), 1, f);
    }
  }
  std::fclose(f);
}

}  // namespace heom
