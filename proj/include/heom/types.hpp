#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace heom {

using cx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cx, Eigen::RowMajor>;
using SparseMatrixCol = Eigen::SparseMatrix<cx, Eigen::ColMajor>;
using Triplet = Eigen::Triplet<cx>;

inline constexpr cx iu{0.0, 1.0};

// Absolute tolerance used when validating Hermiticity of input operators.
inline constexpr double kHermitianTol = 1e-12;

// Invalid physical parameters (domains, singular parameter combinations).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A call that violates an API contract (wrong parity sector, flavor, ...).
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

// Lookup of an ADO or bath that is not part of the constructed model.
struct NotFoundError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// A linear/ODE solver failed to reach the requested tolerance.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configuration document failed validation.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_hermitian(const DenseMatrix& a, double tol = kHermitianTol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace heom
