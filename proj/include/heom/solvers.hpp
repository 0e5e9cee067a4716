#pragma once

#include <memory>
#include <string>
#include <vector>

#include "heom/liouvillian.hpp"
#include "heom/types.hpp"

namespace heom {

// The stacked state of all vectorized ADOs. The standard initial condition
// puts vec(rho_s(0)) in the root block and zeros elsewhere.
struct AdosVector {
  Vector data;
  std::shared_ptr<const HierarchySpace> space;
  Parity parity = Parity::Even;
  int sys_dim = 0;

  static AdosVector from_reduced(const DenseMatrix& rho0,
                                 std::shared_ptr<const HierarchySpace> space,
                                 Parity parity = Parity::Even);
  DenseMatrix block(std::size_t flat) const;
  DenseMatrix root() const { return block(0); }
};

struct SolveReport {
  std::string method;
  long steps = 0;           // accepted steps or iterations
  double residual = 0.0;    // the residual actually achieved
  double wall_seconds = 0.0;
};

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double dt_init = 0.0;   // 0: automatic
  long max_steps = 100'000'000;
};

// Adaptive Dormand-Prince 5(4) integration of dx/dt = M(t) x with output at
// t_list (strictly increasing from the initial time).
std::vector<AdosVector> evolve_ode(const HeomMatrix& M, const AdosVector& x0,
                                   const std::vector<double>& t_list,
                                   const OdeOptions& opt = {},
                                   SolveReport* report = nullptr);

struct ExpmOptions {
  double drop_tol = 1e-14;    // entries below drop_tol * max|P| are pruned
  double densify_fill = 0.25; // switch to dense squaring beyond this fill
};

// Propagator method: P = exp(M dt) once by scaling-and-squaring, then applied
// repeatedly. Requires a time-independent M and uniform t_list.
std::vector<AdosVector> evolve_expm(const HeomMatrix& M, const AdosVector& x0,
                                    const std::vector<double>& t_list,
                                    const ExpmOptions& opt = {},
                                    SolveReport* report = nullptr);

// Single-step propagator exp(m * dt) by scaling-and-squaring with sparsity
// pruning (a dense intermediate is re-sparsified on return).
SparseMatrix sparse_expm(const SparseMatrix& m, double dt,
                         const ExpmOptions& opt = {});

struct LinearOptions {
  enum class Method { DirectLU, Gmres };
  Method method = Method::DirectLU;
  double tol = 1e-12;
  int max_iterations = 2000;
  int restart = 60;
};

// Stationary state: M x = 0 with the root-block (0,0) row replaced by the
// trace functional Tr rho^(0,0) = 1. Reports ||M x||_inf / ||x||_inf w.r.t.
// the original generator.
AdosVector steadystate(const HeomMatrix& M, const LinearOptions& opt = {},
                       SolveReport* report = nullptr);

// Solves (M + sign*i*omega) x = b.
Vector shifted_solve(const HeomMatrix& M, double omega, int sign,
                     const Vector& b, const LinearOptions& opt = {},
                     SolveReport* report = nullptr);

// Binary trajectory dump: 16-byte magic "HEOMADOS\0" (zero padded), u32
// version, u64 {n_ado, sys_dim, n_times}, then per time point the f64 time
// followed by little-endian (re, im) f64 pairs of the full stacked state.
void write_ados_binary(const std::string& path,
                       const std::vector<double>& t_list,
                       const std::vector<AdosVector>& trajectory);

}  // namespace heom
