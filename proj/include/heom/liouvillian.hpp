#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "heom/bath.hpp"
#include "heom/hierarchy.hpp"
#include "heom/types.hpp"

namespace heom {

// System Hamiltonian: a constant Hermitian part plus optional drive terms
// H(t) = H0 + sum_k f_k(t) * H_k with real scalar coefficient functions.
struct SystemSpec {
  DenseMatrix H0;
  struct Drive {
    DenseMatrix op;
    std::function<double(double)> coeff;
  };
  std::vector<Drive> drives;

  static SystemSpec constant(DenseMatrix H);
  int dim() const { return static_cast<int>(H0.rows()); }
  bool time_dependent() const { return !drives.empty(); }
  void validate() const;
};

// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
Vector vectorize(const DenseMatrix& rho);
DenseMatrix unvectorize(const Vector& v, int d);
DenseMatrix left_mul(const DenseMatrix& a);   // I kron A
DenseMatrix right_mul(const DenseMatrix& b);  // B^T kron I

// The sparse HEOM generator acting on the stacked vectorized ADOs. The
// constant part holds bath couplings, decay rates and the H0 Liouvillian;
// drive terms are kept as separate block-diagonal matrices re-weighted by
// their coefficient functions inside apply().
class HeomMatrix {
 public:
  const SparseMatrix& matrix() const { return mat_; }
  SparseMatrix& matrix() { return mat_; }
  Parity parity() const { return parity_; }
  const std::shared_ptr<const HierarchySpace>& space() const { return space_; }
  int sys_dim() const { return sys_dim_; }
  Eigen::Index dim() const { return mat_.rows(); }
  bool time_dependent() const { return !drive_mats_.empty(); }

  Vector apply(const Vector& x, double t = 0.0) const;

  // Adds conj(F) kron F - (I kron F'F + (F'F)^T kron I)/2 to every diagonal
  // ADO block. The ADO space is unchanged; F must be pre-scaled by sqrt(rate).
  void add_lindblad(const DenseMatrix& F);

  // One `row col re im` line per stored entry, 0-based, %.17g.
  void export_coo(const std::string& path) const;

  const std::vector<SparseMatrix>& drive_matrices() const { return drive_mats_; }
  const std::vector<std::function<double(double)>>& drive_coeffs() const {
    return drive_fns_;
  }

 private:
  friend HeomMatrix build_heomls(const SystemSpec&, const std::vector<BathSpec>&,
                                 std::shared_ptr<const HierarchySpace>, Parity,
                                 int);
  SparseMatrix mat_;
  std::vector<SparseMatrix> drive_mats_;
  std::vector<std::function<double(double)>> drive_fns_;
  Parity parity_ = Parity::Even;
  std::shared_ptr<const HierarchySpace> space_;
  int sys_dim_ = 0;
};

// Assembles the generator over `space` in the requested parity sector.
// Assembly parallelizes over ADO row blocks; the result is identical for any
// thread count.
HeomMatrix build_heomls(const SystemSpec& system,
                        const std::vector<BathSpec>& baths,
                        std::shared_ptr<const HierarchySpace> space,
                        Parity parity = Parity::Even, int threads = 1);

}  // namespace heom
