#include "heom/liouvillian.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

namespace heom {
namespace {

// Per-row accumulator for one ADO row block: (col, val) pairs, merged later.
using RowEntries = std::vector<std::pair<Eigen::Index, cx>>;

// alpha*(I kron A): vec(A X), entries ((c,i),(c,k)) = A(i,k).
void emit_left(std::vector<RowEntries>& rows, Eigen::Index col_base, int d,
               cx alpha, const DenseMatrix& a) {
  if (alpha == cx(0, 0)) return;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const cx v = alpha * a(i, k);
      if (v == cx(0, 0)) continue;
      for (int c = 0; c < d; ++c)
        rows[static_cast<std::size_t>(c) * d + i].emplace_back(
            col_base + static_cast<Eigen::Index>(c) * d + k, v);
    }
}

// beta*(B^T kron I): vec(X B), entries ((c,i),(e,i)) = B(e,c).
void emit_right(std::vector<RowEntries>& rows, Eigen::Index col_base, int d,
                cx beta, const DenseMatrix& b) {
  if (beta == cx(0, 0)) return;
  for (int e = 0; e < d; ++e)
    for (int c = 0; c < d; ++c) {
      const cx v = beta * b(e, c);
      if (v == cx(0, 0)) continue;
      for (int i = 0; i < d; ++i)
        rows[static_cast<std::size_t>(c) * d + i].emplace_back(
            col_base + static_cast<Eigen::Index>(e) * d + i, v);
    }
}

int sign_pow(int exponent) { return (exponent % 2 == 0) ? 1 : -1; }

}  // namespace

SystemSpec SystemSpec::constant(DenseMatrix H) {
  SystemSpec s;
  s.H0 = std::move(H);
  s.validate();
  return s;
}

void SystemSpec::validate() const {
  if (H0.rows() == 0 || H0.rows() != H0.cols())
    throw ParameterError("system: Hamiltonian must be a nonempty square matrix");
  if (!is_hermitian(H0))
    throw ParameterError("system: constant Hamiltonian part must be Hermitian");
  for (const auto& drv : drives) {
    if (drv.op.rows() != H0.rows() || drv.op.cols() != H0.cols())
      throw ParameterError("system: drive operator dimension mismatch");
    if (!is_hermitian(drv.op))
      throw ParameterError("system: drive operators must be Hermitian");
    if (!drv.coeff) throw ParameterError("system: drive coefficient missing");
  }
}

Vector vectorize(const DenseMatrix& rho) {
  return Eigen::Map<const Vector>(rho.data(), rho.size());
}

DenseMatrix unvectorize(const Vector& v, int d) {
  if (v.size() != static_cast<Eigen::Index>(d) * d)
    throw ParameterError("unvectorize: length is not d^2");
  return Eigen::Map<const DenseMatrix>(v.data(), d, d);
}

DenseMatrix left_mul(const DenseMatrix& a) {
  const int d = static_cast<int>(a.rows());
  if (a.cols() != d) throw ParameterError("left_mul: square input required");
  DenseMatrix out = DenseMatrix::Zero(d * d, d * d);
  for (int c = 0; c < d; ++c) out.block(c * d, c * d, d, d) = a;
  return out;
}

DenseMatrix right_mul(const DenseMatrix& b) {
  const int d = static_cast<int>(b.rows());
  if (b.cols() != d) throw ParameterError("right_mul: square input required");
  DenseMatrix out = DenseMatrix::Zero(d * d, d * d);
  for (int c = 0; c < d; ++c)
    for (int e = 0; e < d; ++e)
      out.block(c * d, e * d, d, d) =
          b(e, c) * DenseMatrix::Identity(d, d);
  return out;
}

HeomMatrix build_heomls(const SystemSpec& system,
                        const std::vector<BathSpec>& baths,
                        std::shared_ptr<const HierarchySpace> space,
                        Parity parity, int threads) {
  system.validate();
  if (!space) throw UsageError("build_heomls: null hierarchy space");
  const ExponentTable& table = space->exponents();
  const int d = system.dim();

  if (table.sys_dim != 0 && table.sys_dim != d)
    throw ParameterError("build_heomls: bath operators do not match system dimension");
  // The space must have been enumerated from these baths.
  {
    const ExponentTable check = ExponentTable::build(baths);
    const bool same =
        check.K_b() == table.K_b() && check.K_f() == table.K_f() &&
        [&] {
          for (int i = 0; i < check.K_b(); ++i)
            if (check.boson[i].xi != table.boson[i].xi ||
                check.boson[i].chi != table.boson[i].chi ||
                check.boson[i].part != table.boson[i].part)
              return false;
          for (int i = 0; i < check.K_f(); ++i)
            if (check.fermion[i].eta != table.fermion[i].eta ||
                check.fermion[i].gamma != table.fermion[i].gamma ||
                check.fermion[i].nu != table.fermion[i].nu)
              return false;
          return true;
        }();
    if (!same)
      throw UsageError("build_heomls: bath exponents do not match the hierarchy space");
  }
  if (parity == Parity::Odd && table.K_f() == 0)
    throw UsageError("build_heomls: odd parity requires a fermionic bath");

  const int D = d * d;
  const std::size_t n_ado = space->size();
  const Eigen::Index dim = static_cast<Eigen::Index>(n_ado) * D;
  const int parity_sign = parity == Parity::Odd ? -1 : +1;

  // Precompute the adjoints of the coupling operators.
  std::vector<DenseMatrix> ops_dag(table.ops.size());
  for (std::size_t i = 0; i < table.ops.size(); ++i)
    ops_dag[i] = table.ops[i].adjoint();
  const auto op_pow = [&](int op, int nu) -> const DenseMatrix& {
    return nu == +1 ? ops_dag[static_cast<std::size_t>(op)]
                    : table.ops[static_cast<std::size_t>(op)];
  };

  // Row-block assembly; deterministic for any thread count because every
  // block's entries are generated and merged in a thread-independent order.
  std::vector<std::vector<RowEntries>> blocks(n_ado);
  const auto assemble_block = [&](std::size_t a) {
    const AdoIndex& ado = space->ado_at(a);
    const int n = ado.n;
    std::vector<RowEntries> rows(static_cast<std::size_t>(D));

    // Diagonal: -i [H0, .] - (sum chi + sum gamma) I, diagonal kept explicit.
    cx decay = 0.0;
    for (int id : ado.j) decay += table.boson[static_cast<std::size_t>(id)].chi;
    for (int id : ado.q) decay += table.fermion[static_cast<std::size_t>(id)].gamma;
    const Eigen::Index diag_base = static_cast<Eigen::Index>(a) * D;
    for (int r = 0; r < D; ++r)
      rows[static_cast<std::size_t>(r)].emplace_back(diag_base + r, -decay);
    emit_left(rows, diag_base, d, -iu, system.H0);
    emit_right(rows, diag_base, d, iu, system.H0);

    for (const Neighbor& nb : space->neighbors(ado)) {
      const Eigen::Index col_base = static_cast<Eigen::Index>(nb.flat) * D;
      switch (nb.dir) {
        case Direction::UpFermion: {
          const auto& mode = table.fermion[static_cast<std::size_t>(nb.mode)];
          const DenseMatrix& dbar = op_pow(mode.op, -mode.nu);
          // Reordering sign for prepending the new index, (-1)^(n+1-w).
          const cx f = -iu * static_cast<double>(sign_pow(n + 1 - nb.position));
          emit_left(rows, col_base, d, f * static_cast<double>(parity_sign), dbar);
          emit_right(rows, col_base, d, f * static_cast<double>(sign_pow(n + 1)), dbar);
          break;
        }
        case Direction::DownFermion: {
          const auto& mode = table.fermion[static_cast<std::size_t>(nb.mode)];
          const DenseMatrix& dnu = op_pow(mode.op, mode.nu);
          const cx f = -iu * static_cast<double>(sign_pow(n - nb.position));
          emit_left(rows, col_base, d,
                    f * static_cast<double>(parity_sign) * mode.eta, dnu);
          emit_right(rows, col_base, d,
                     f * static_cast<double>(sign_pow(n)) * std::conj(mode.eta_partner),
                     dnu);
          break;
        }
        case Direction::UpBoson: {
          const auto& mode = table.boson[static_cast<std::size_t>(nb.mode)];
          const DenseMatrix& v = table.ops[static_cast<std::size_t>(mode.op)];
          emit_left(rows, col_base, d, -iu, v);
          emit_right(rows, col_base, d, iu, v);
          break;
        }
        case Direction::DownBoson: {
          const auto& mode = table.boson[static_cast<std::size_t>(nb.mode)];
          const DenseMatrix& v = table.ops[static_cast<std::size_t>(mode.op)];
          const double c = static_cast<double>(nb.count);
          switch (mode.part) {
            case BosonPart::Real:
              emit_left(rows, col_base, d, -iu * c * mode.xi, v);
              emit_right(rows, col_base, d, iu * c * mode.xi, v);
              break;
            case BosonPart::Imag:
              // -i * (i xi [V, .]_+) = xi (LV + RV)
              emit_left(rows, col_base, d, c * mode.xi, v);
              emit_right(rows, col_base, d, c * mode.xi, v);
              break;
            case BosonPart::Combined:
              emit_left(rows, col_base, d, -iu * c * mode.xi, v);
              emit_right(rows, col_base, d, iu * c * std::conj(mode.xi), v);
              break;
          }
          break;
        }
      }
    }

    // Merge duplicate columns; summation order is the generation order.
    for (auto& row : rows) {
      std::stable_sort(row.begin(), row.end(),
                       [](const auto& x, const auto& y) { return x.first < y.first; });
      std::size_t out = 0;
      for (std::size_t i = 0; i < row.size();) {
        Eigen::Index col = row[i].first;
        cx sum = row[i].second;
        for (++i; i < row.size() && row[i].first == col; ++i) sum += row[i].second;
        row[out++] = {col, sum};
      }
      row.resize(out);
    }
    blocks[a] = std::move(rows);
  };

  const int nthreads = std::max(1, threads);
  if (nthreads == 1 || n_ado < 2) {
    for (std::size_t a = 0; a < n_ado; ++a) assemble_block(a);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (std::size_t a = next.fetch_add(1); a < n_ado; a = next.fetch_add(1))
          assemble_block(a);
      });
    for (auto& th : pool) th.join();
  }

  HeomMatrix M;
  M.parity_ = parity;
  M.space_ = std::move(space);
  M.sys_dim_ = d;
  M.mat_.resize(dim, dim);

  std::vector<Eigen::Index> nnz_per_row(static_cast<std::size_t>(dim));
  for (std::size_t a = 0; a < n_ado; ++a)
    for (int r = 0; r < D; ++r)
      nnz_per_row[a * static_cast<std::size_t>(D) + r] =
          static_cast<Eigen::Index>(blocks[a][static_cast<std::size_t>(r)].size());
  {
    // Fill CSR arrays directly.
    SparseMatrix& sm = M.mat_;
    sm.resize(dim, dim);
    Eigen::Index total = 0;
    for (auto v : nnz_per_row) total += v;
    sm.resizeNonZeros(total);
    auto* outer = sm.outerIndexPtr();
    auto* inner = sm.innerIndexPtr();
    auto* vals = sm.valuePtr();
    outer[0] = 0;
    for (Eigen::Index r = 0; r < dim; ++r)
      outer[r + 1] = outer[r] + static_cast<SparseMatrix::StorageIndex>(
                                    nnz_per_row[static_cast<std::size_t>(r)]);
    for (std::size_t a = 0; a < n_ado; ++a)
      for (int r = 0; r < D; ++r) {
        const auto& row = blocks[a][static_cast<std::size_t>(r)];
        Eigen::Index k = outer[a * static_cast<std::size_t>(D) + r];
        for (const auto& [col, val] : row) {
          inner[k] = static_cast<SparseMatrix::StorageIndex>(col);
          vals[k] = val;
          ++k;
        }
      }
  }

  // Drive terms: block-diagonal -i [H_k, .] over all ADOs.
  for (const auto& drv : system.drives) {
    std::vector<RowEntries> rows(static_cast<std::size_t>(D));
    emit_left(rows, 0, d, -iu, drv.op);
    emit_right(rows, 0, d, iu, drv.op);
    std::vector<Triplet> trip;
    for (int r = 0; r < D; ++r)
      for (const auto& [col, val] : rows[static_cast<std::size_t>(r)])
        for (std::size_t a = 0; a < n_ado; ++a)
          trip.emplace_back(static_cast<Eigen::Index>(a) * D + r,
                            static_cast<Eigen::Index>(a) * D + col, val);
    SparseMatrix dm(dim, dim);
    dm.setFromTriplets(trip.begin(), trip.end());
    M.drive_mats_.push_back(std::move(dm));
    M.drive_fns_.push_back(drv.coeff);
  }
  return M;
}

Vector HeomMatrix::apply(const Vector& x, double t) const {
  if (x.size() != dim()) throw ParameterError("apply: vector length mismatch");
  Vector y = mat_ * x;
  for (std::size_t k = 0; k < drive_mats_.size(); ++k)
    y += drive_fns_[k](t) * (drive_mats_[k] * x);
  return y;
}

void HeomMatrix::add_lindblad(const DenseMatrix& F) {
  const int d = sys_dim_;
  if (F.rows() != d || F.cols() != d)
    throw ParameterError("add_lindblad: jump operator dimension mismatch");
  const int D = d * d;
  const DenseMatrix FdF = F.adjoint() * F;

  std::vector<RowEntries> rows(static_cast<std::size_t>(D));
  // conj(F) kron F: ((c,i),(e,k)) = conj(F(c,e)) * F(i,k)
  for (int c = 0; c < d; ++c)
    for (int e = 0; e < d; ++e) {
      const cx p = std::conj(F(c, e));
      if (p == cx(0, 0)) continue;
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
          const cx v = p * F(i, k);
          if (v == cx(0, 0)) continue;
          rows[static_cast<std::size_t>(c) * d + i].emplace_back(
              static_cast<Eigen::Index>(e) * d + k, v);
        }
    }
  emit_left(rows, 0, d, cx(-0.5, 0.0), FdF);
  emit_right(rows, 0, d, cx(-0.5, 0.0), FdF);

  const std::size_t n_ado = space_->size();
  std::vector<Triplet> trip;
  for (int r = 0; r < D; ++r)
    for (const auto& [col, val] : rows[static_cast<std::size_t>(r)])
      for (std::size_t a = 0; a < n_ado; ++a)
        trip.emplace_back(static_cast<Eigen::Index>(a) * D + r,
                          static_cast<Eigen::Index>(a) * D + col, val);
  SparseMatrix add(dim(), dim());
  add.setFromTriplets(trip.begin(), trip.end());
  mat_ += add;
}

void HeomMatrix::export_coo(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw SolverError("export_coo: cannot open " + path);
  for (Eigen::Index r = 0; r < mat_.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(mat_, r); it; ++it)
      std::fprintf(f, "%lld %lld %.17g %.17g\n",
                   static_cast<long long>(it.row()),
                   static_cast<long long>(it.col()), it.value().real(),
                   it.value().imag());
  std::fclose(f);
}

}  // namespace heom
