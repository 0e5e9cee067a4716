#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "heom/bath.hpp"
#include "heom/types.hpp"

namespace heom {

enum class Parity { Even, Odd };
enum class Direction { UpBoson, DownBoson, UpFermion, DownFermion };

// Flattened view of every bath exponent with global mode ids: bosonic modes
// 0..K_b-1 and fermionic modes 0..K_f-1, in bath order.
struct ExponentTable {
  struct FermionMode {
    cx eta, gamma;
    int nu = +1;
    cx eta_partner;  // eta of the opposite-nu exponent with the same (bath, h)
    int op = 0;      // index into `ops`
    int bath = 0;    // index into the source bath list
    int h = 1;       // 1-based term index within the nu family
  };
  struct BosonMode {
    cx xi, chi;
    BosonPart part = BosonPart::Combined;
    int op = 0;
    int bath = 0;
    int l = 1;
  };

  std::vector<BosonMode> boson;
  std::vector<FermionMode> fermion;
  std::vector<DenseMatrix> ops;       // coupling operator per source bath
  std::vector<std::string> bath_ids;  // per source bath
  std::vector<std::string> channels;
  std::vector<BathFlavor> flavors;
  int sys_dim = 0;

  int K_b() const { return static_cast<int>(boson.size()); }
  int K_f() const { return static_cast<int>(fermion.size()); }

  static ExponentTable build(const std::vector<BathSpec>& baths);
};

// Label of one auxiliary density operator. j holds bosonic mode ids ascending
// with repeats (|j| = m); q holds strictly ascending fermionic mode ids
// (|q| = n, Pauli exclusion). `parity` tags the sector of the stacked state
// the label belongs to; both parity sectors share one enumeration.
struct AdoIndex {
  int m = 0, n = 0;
  std::vector<int> j;
  std::vector<int> q;
  Parity parity = Parity::Even;
  std::size_t flat = 0;

  int level() const { return m + n; }
};

struct Neighbor {
  std::size_t flat = 0;  // coupled ADO
  int mode = 0;          // global exponent id carried by the coupling
  // 1-based ascending rank of `mode` (fermionic moves; fixes the Eq.-of-motion
  // signs). 0 for bosonic moves.
  int position = 0;
  int count = 1;  // multiset multiplicity (DownBoson), else 1
  Direction dir = Direction::UpBoson;
};

// Importance estimate of an ADO: product over its bosonic and fermionic
// indices of |coeff/Re(rate)| / cumsum(Re(rate)), in canonical order.
double importance(const AdoIndex& ado, const ExponentTable& table);

// The enumerated, importance-filtered ADO index space with a bidirectional
// flat-index dictionary. Immutable once built; safe for concurrent reads.
class HierarchySpace {
 public:
  struct Options {
    int m_max = 0;
    int n_max = 0;
    double importance_threshold = 0.0;
  };

  static std::shared_ptr<const HierarchySpace> enumerate(ExponentTable table,
                                                         const Options& opt);

  // Retained-ADO count without materializing the space.
  static std::uint64_t count(const ExponentTable& table, const Options& opt);

  std::size_t size() const { return ados_.size(); }
  const AdoIndex& ado_at(std::size_t flat) const;
  const std::vector<AdoIndex>& ados() const { return ados_; }

  // Flat position of the key (j multiset, q set); throws NotFoundError whose
  // message distinguishes tier overflow from importance pruning.
  std::size_t index_of(std::span<const int> j, std::span<const int> q) const;
  bool contains(std::span<const int> j, std::span<const int> q) const;
  std::size_t index_of(std::initializer_list<int> j,
                       std::initializer_list<int> q) const {
    return index_of(std::span<const int>(j.begin(), j.size()),
                    std::span<const int>(q.begin(), q.size()));
  }
  bool contains(std::initializer_list<int> j, std::initializer_list<int> q) const {
    return contains(std::span<const int>(j.begin(), j.size()),
                    std::span<const int>(q.begin(), q.size()));
  }

  std::vector<Neighbor> neighbors(const AdoIndex& ado) const;

  const ExponentTable& exponents() const { return table_; }
  int K_b() const { return table_.K_b(); }
  int K_f() const { return table_.K_f(); }
  int m_max() const { return opt_.m_max; }
  int n_max() const { return opt_.n_max; }
  double importance_threshold() const { return opt_.importance_threshold; }
  int sys_dim() const { return table_.sys_dim; }

 private:
  HierarchySpace() = default;
  std::size_t find(std::span<const int> j, std::span<const int> q) const;

  ExponentTable table_;
  Options opt_;
  std::vector<AdoIndex> ados_;
  std::unordered_map<std::string, std::size_t> lookup_;
  static std::string key_of(std::span<const int> j, std::span<const int> q);
};

}  // namespace heom
