#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <set>

#include "heom/liouvillian.hpp"
#include "heom/oracles.hpp"

using namespace heom;

namespace {

DenseMatrix lower2() {
  DenseMatrix d(2, 2);
  d << 0, 1, 0, 0;
  return d;
}

DenseMatrix random_matrix(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  DenseMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) m(i, k) = cx(u(rng), u(rng));
  return m;
}

std::vector<BathSpec> toy_fermion(double mu) {
  std::vector<FermionicExponent> plus, minus;
  for (int h = 1; h <= 3; ++h) {
    plus.push_back({cx(0.3 / h, 0.05 * h), cx(0.8 * h, -mu), +1});
    minus.push_back({cx(0.25 / h, -0.04 * h), cx(0.8 * h, mu), -1});
  }
  return {BathSpec::fermionic(lower2(), plus, minus, "T", "d")};
}

SystemSpec toy_system() {
  DenseMatrix h(2, 2);
  h << 0.3, cx(0.1, 0.2), cx(0.1, -0.2), -0.5;
  return SystemSpec::constant(h);
}

}  // namespace

TEST_CASE("vectorization follows the column-stacking convention") {
  DenseMatrix m(2, 2);
  m << 1, 2, 3, 4;
  const Vector v = vectorize(m);
  CHECK(v(0) == cx(1, 0));
  CHECK(v(1) == cx(3, 0));
  CHECK(v(2) == cx(2, 0));
  CHECK(v(3) == cx(4, 0));
  CHECK(unvectorize(v, 2) == m);

  CHECK(left_mul(DenseMatrix::Identity(3, 3)) == DenseMatrix::Identity(9, 9));

  const DenseMatrix a = random_matrix(3, 1), b = random_matrix(3, 2);
  const DenseMatrix x = random_matrix(3, 3);
  // vec(A X B) = right_mul(B) * left_mul(A) * vec(X), and L/R commute.
  const Vector lhs = vectorize(a * x * b);
  const Vector rhs = right_mul(b) * (left_mul(a) * vectorize(x));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((left_mul(a) * right_mul(b) - right_mul(b) * left_mul(a))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
}

TEST_CASE("no baths: the bare Liouvillian on a single ADO") {
  auto space = HierarchySpace::enumerate(ExponentTable::build({}), {0, 0, 0.0});
  const SystemSpec sys = toy_system();
  const HeomMatrix M = build_heomls(sys, {}, space, Parity::Even);
  const DenseMatrix expected =
      -iu * (left_mul(sys.H0) - right_mul(sys.H0));
  CHECK((DenseMatrix(M.matrix()) - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("assembled generator equals the ordered-vector construction exactly") {
  const auto result = oracles::run_suite("generator");
  INFO(result.detail);
  CHECK(result.pass);
}

TEST_CASE("full ordered-vector embedding is invariant") {
  const auto result = oracles::run_suite("embedding");
  INFO(result.detail);
  CHECK(result.pass);
}

TEST_CASE("parity flip changes exactly the fermionic left-action blocks") {
  auto baths = toy_fermion(0.3);
  auto space = HierarchySpace::enumerate(ExponentTable::build(baths), {0, 2, 0.0});
  const SystemSpec sys = toy_system();
  const HeomMatrix Me = build_heomls(sys, baths, space, Parity::Even);
  const HeomMatrix Mo = build_heomls(sys, baths, space, Parity::Odd);
  const DenseMatrix diff = DenseMatrix(Me.matrix()) - DenseMatrix(Mo.matrix());

  const int D = 4;
  for (const AdoIndex& ado : space->ados()) {
    std::set<std::size_t> coupled;
    for (const auto& nb : space->neighbors(ado))
      if (nb.dir == Direction::UpFermion || nb.dir == Direction::DownFermion)
        coupled.insert(nb.flat);
    for (const AdoIndex& other : space->ados()) {
      const double blk = diff.block(ado.flat * D, other.flat * D, D, D)
                             .cwiseAbs()
                             .maxCoeff();
      if (coupled.count(other.flat))
        CHECK(blk > 0.0);
      else
        CHECK(blk == 0.0);
    }
  }
}

TEST_CASE("odd parity without fermionic baths is a usage error") {
  std::vector<BosonicExponent> bexp{{cx(0.4, 0), cx(0.5, 0), BosonPart::Real}};
  DenseMatrix v(2, 2);
  v << 1, 0, 0, -1;
  std::vector<BathSpec> baths{BathSpec::bosonic(v, bexp, "B")};
  auto space = HierarchySpace::enumerate(ExponentTable::build(baths), {1, 0, 0.0});
  CHECK_THROWS_AS(build_heomls(toy_system(), baths, space, Parity::Odd),
                  UsageError);
}

TEST_CASE("bath/space mismatch is rejected") {
  auto baths = toy_fermion(0.3);
  auto space = HierarchySpace::enumerate(ExponentTable::build(baths), {0, 2, 0.0});
  auto other = toy_fermion(0.7);
  CHECK_THROWS_AS(build_heomls(toy_system(), other, space, Parity::Even),
                  UsageError);
}

TEST_CASE("assembly is byte-identical across thread counts") {
  auto baths = toy_fermion(0.2);
  auto space = HierarchySpace::enumerate(ExponentTable::build(baths), {0, 2, 0.0});
  const SystemSpec sys = toy_system();
  const HeomMatrix m1 = build_heomls(sys, baths, space, Parity::Even, 1);
  for (int threads : {2, 8}) {
    const HeomMatrix mt = build_heomls(sys, baths, space, Parity::Even, threads);
    REQUIRE(mt.matrix().nonZeros() == m1.matrix().nonZeros());
    const auto n = m1.matrix().nonZeros();
    CHECK(std::memcmp(mt.matrix().valuePtr(), m1.matrix().valuePtr(),
                      sizeof(cx) * n) == 0);
    CHECK(std::memcmp(mt.matrix().innerIndexPtr(), m1.matrix().innerIndexPtr(),
                      sizeof(SparseMatrix::StorageIndex) * n) == 0);
  }
}

TEST_CASE("trace functional annihilates the root-block time derivative") {
  auto baths = toy_fermion(0.1);
  auto space = HierarchySpace::enumerate(ExponentTable::build(baths), {0, 2, 0.0});
  const HeomMatrix M = build_heomls(toy_system(), baths, space, Parity::Even);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 5; ++rep) {
    Vector x(M.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = cx(u(rng), u(rng));
    const Vector y = M.apply(x);
    // Trace of the root block of dx/dt.
    const cx tr = y(0) + y(3);
    CHECK(std::abs(tr) < 1e-12 * x.cwiseAbs().maxCoeff() * 100);
  }
}

TEST_CASE("lindblad: F = 0 leaves the generator unchanged") {
  auto baths = toy_fermion(0.1);
  auto space = HierarchySpace::enumerate(ExponentTable::build(baths), {0, 1, 0.0});
  HeomMatrix M = build_heomls(toy_system(), baths, space, Parity::Even);
  const DenseMatrix before = DenseMatrix(M.matrix());
  M.add_lindblad(DenseMatrix::Zero(2, 2));
  CHECK((DenseMatrix(M.matrix()) - before).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(M.add_lindblad(DenseMatrix::Zero(3, 3)), ParameterError);
}

TEST_CASE("time-dependent drive reproduces dense evaluation") {
  DenseMatrix h0(2, 2), h1(2, 2);
  h0 << 1, 0, 0, -1;
  h1 << 0, 1, 1, 0;
  SystemSpec sys;
  sys.H0 = h0;
  sys.drives.push_back({h1, [](double t) { return std::cos(2.0 * t); }});

  auto space = HierarchySpace::enumerate(ExponentTable::build({}), {0, 0, 0.0});
  const HeomMatrix M = build_heomls(sys, {}, space, Parity::Even);
  REQUIRE(M.time_dependent());

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  Vector x(4);
  for (int i = 0; i < 4; ++i) x[i] = cx(u(rng), u(rng));
  for (double t : {0.0, 0.4, 1.3}) {
    const DenseMatrix ht = h0 + std::cos(2.0 * t) * h1;
    const Vector expect = -iu * (left_mul(ht) - right_mul(ht)) * x;
    CHECK((M.apply(x, t) - expect).cwiseAbs().maxCoeff() < 1e-14);
  }

  // Coefficient identically 1 reproduces the constant matrix action.
  SystemSpec sys1;
  sys1.H0 = h0;
  sys1.drives.push_back({h1, [](double) { return 1.0; }});
  const HeomMatrix M1 = build_heomls(sys1, {}, space, Parity::Even);
  const HeomMatrix Mc = build_heomls(SystemSpec::constant(h0 + h1), {}, space,
                                     Parity::Even);
  CHECK((M1.apply(x, 0.7) - Mc.apply(x, 0.1)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("coo export round-trips entries") {
  auto baths = toy_fermion(0.1);
  auto space = HierarchySpace::enumerate(ExponentTable::build(baths), {0, 1, 0.0});
  const HeomMatrix M = build_heomls(toy_system(), baths, space, Parity::Even);
  const std::string path = "/tmp/heom_test_export.coo";
  M.export_coo(path);

  std::ifstream in(path);
  REQUIRE(in.good());
  DenseMatrix re = DenseMatrix::Zero(M.dim(), M.dim());
  long long r, c;
  double vr, vi;
  while (in >> r >> c >> vr >> vi) re(r, c) = cx(vr, vi);
  CHECK((re - DenseMatrix(M.matrix())).cwiseAbs().maxCoeff() == 0.0);
}
