#include "heom/hierarchy.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

namespace heom {
namespace {

// Lexicographically next non-decreasing sequence (multiset) over 0..base-1.
bool next_multiset(std::vector<int>& v, int base) {
  const int m = static_cast<int>(v.size());
  for (int i = m - 1; i >= 0; --i) {
    if (v[i] + 1 < base) {
      const int val = v[i] + 1;
      for (int k = i; k < m; ++k) v[k] = val;
      return true;
    }
  }
  return false;
}

// Lexicographically next strictly increasing sequence (subset) over 0..base-1.
bool next_subset(std::vector<int>& v, int base) {
  const int n = static_cast<int>(v.size());
  for (int i = n - 1; i >= 0; --i) {
    if (v[i] + 1 <= base - (n - i)) {
      ++v[i];
      for (int k = i + 1; k < n; ++k) v[k] = v[k - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<int> first_multiset(int m) { return std::vector<int>(m, 0); }

std::vector<int> first_subset(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

bool always_retained(int m, int n) {
  return m + n < 2 || (m == 1 && n == 1);
}

// Visits every in-tier (j, q) candidate of one (m, n) cell.
template <typename F>
void for_each_cell(int K_b, int K_f, int m, int n, F&& visit) {
  if (m > 0 && K_b == 0) return;
  if (n > K_f) return;
  std::vector<int> j = first_multiset(m);
  do {
    std::vector<int> q = first_subset(n);
    do {
      visit(j, q);
    } while (n > 0 && next_subset(q, K_f));
  } while (m > 0 && next_multiset(j, K_b));
}

}  // namespace

ExponentTable ExponentTable::build(const std::vector<BathSpec>& baths) {
  ExponentTable t;
  for (std::size_t b = 0; b < baths.size(); ++b) {
    const auto& bath = baths[b];
    if (t.sys_dim == 0) t.sys_dim = bath.sys_dim();
    if (bath.sys_dim() != t.sys_dim)
      throw ParameterError("exponent table: coupling operator dimensions differ");
    t.ops.push_back(bath.coupling_op());
    t.bath_ids.push_back(bath.bath_id());
    t.channels.push_back(bath.channel());
    t.flavors.push_back(bath.flavor());
    if (bath.flavor() == BathFlavor::Bosonic) {
      int l = 1;
      for (const auto& e : bath.bosonic_exponents())
        t.boson.push_back({e.xi, e.chi, e.part, static_cast<int>(b),
                           static_cast<int>(b), l++});
    } else {
      const auto& exps = bath.fermionic_exponents();
      const int fam = bath.family_size();
      for (int i = 0; i < 2 * fam; ++i) {
        const auto& e = exps[i];
        const auto& partner = exps[i < fam ? i + fam : i - fam];
        t.fermion.push_back({e.eta, e.gamma, e.nu, partner.eta,
                             static_cast<int>(b), static_cast<int>(b),
                             (i % fam) + 1});
      }
    }
  }
  return t;
}

double importance(const AdoIndex& ado, const ExponentTable& table) {
  double val = 1.0;
  double cum = 0.0;
  for (int id : ado.j) {
    const auto& mode = table.boson.at(static_cast<std::size_t>(id));
    cum += mode.chi.real();
    val *= std::abs(mode.xi) / (mode.chi.real() * cum);
  }
  cum = 0.0;
  for (int id : ado.q) {
    const auto& mode = table.fermion.at(static_cast<std::size_t>(id));
    cum += mode.gamma.real();
    val *= std::abs(mode.eta) / (mode.gamma.real() * cum);
  }
  return val;
}

std::string HierarchySpace::key_of(std::span<const int> j, std::span<const int> q) {
  std::string key;
  key.reserve((j.size() + q.size()) * sizeof(int) + 1);
  key.append(reinterpret_cast<const char*>(j.data()), j.size() * sizeof(int));
  key.push_back('|');
  key.append(reinterpret_cast<const char*>(q.data()), q.size() * sizeof(int));
  return key;
}

std::shared_ptr<const HierarchySpace> HierarchySpace::enumerate(
    ExponentTable table, const Options& opt) {
  if (opt.m_max < 0 || opt.n_max < 0 || opt.importance_threshold < 0)
    throw ParameterError("hierarchy: tiers and threshold must be >= 0");

  auto space = std::shared_ptr<HierarchySpace>(new HierarchySpace());
  space->table_ = std::move(table);
  space->opt_ = opt;
  const auto& t = space->table_;

  for (int level = 0; level <= opt.m_max + opt.n_max; ++level) {
    // Candidates of one level, ordered by key (j first, then q).
    std::vector<AdoIndex> cell;
    for (int n = std::max(0, level - opt.m_max); n <= std::min(level, opt.n_max); ++n) {
      const int m = level - n;
      for_each_cell(t.K_b(), t.K_f(), m, n, [&](const std::vector<int>& j,
                                                const std::vector<int>& q) {
        AdoIndex ado{m, n, j, q, Parity::Even, 0};
        if (!always_retained(m, n) &&
            importance(ado, t) < opt.importance_threshold)
          return;
        cell.push_back(std::move(ado));
      });
    }
    std::sort(cell.begin(), cell.end(), [](const AdoIndex& a, const AdoIndex& b) {
      if (a.j != b.j) return a.j < b.j;
      return a.q < b.q;
    });
    for (auto& ado : cell) {
      ado.flat = space->ados_.size();
      space->lookup_.emplace(key_of(ado.j, ado.q), ado.flat);
      space->ados_.push_back(std::move(ado));
    }
  }
  return space;
}

std::uint64_t HierarchySpace::count(const ExponentTable& t, const Options& opt) {
  if (opt.m_max < 0 || opt.n_max < 0 || opt.importance_threshold < 0)
    throw ParameterError("hierarchy: tiers and threshold must be >= 0");
  std::uint64_t total = 0;
  AdoIndex scratch;
  for (int n = 0; n <= opt.n_max; ++n) {
    for (int m = 0; m <= opt.m_max; ++m) {
      if (always_retained(m, n) || opt.importance_threshold == 0.0) {
        // Whole cell retained: count combinations directly.
        std::uint64_t cnt = 1;
        if (m > 0 || n > 0) {
          std::uint64_t cm = (m == 0) ? 1 : 0, cn = (n == 0) ? 1 : 0;
          if (m > 0) {
            if (t.K_b() == 0) continue;
            cm = 1;  // C(K_b + m - 1, m)
            for (int i = 1; i <= m; ++i)
              cm = cm * static_cast<std::uint64_t>(t.K_b() + i - 1) / i;
          }
          if (n > 0) {
            if (t.K_f() == 0) continue;
            if (n > t.K_f()) continue;
            cn = 1;  // C(K_f, n)
            for (int i = 1; i <= n; ++i)
              cn = cn * static_cast<std::uint64_t>(t.K_f() - i + 1) / i;
          }
          cnt = cm * cn;
        }
        total += cnt;
        continue;
      }
      scratch.m = m;
      scratch.n = n;
      for_each_cell(t.K_b(), t.K_f(), m, n, [&](const std::vector<int>& j,
                                                const std::vector<int>& q) {
        scratch.j = j;
        scratch.q = q;
        if (importance(scratch, t) >= opt.importance_threshold) ++total;
      });
    }
  }
  return total;
}

const AdoIndex& HierarchySpace::ado_at(std::size_t flat) const {
  if (flat >= ados_.size())
    throw NotFoundError("hierarchy: flat index " + std::to_string(flat) +
                        " out of range (space has " +
                        std::to_string(ados_.size()) + " ADOs)");
  return ados_[flat];
}

std::size_t HierarchySpace::find(std::span<const int> j, std::span<const int> q) const {
  const auto it = lookup_.find(key_of(j, q));
  return it == lookup_.end() ? static_cast<std::size_t>(-1) : it->second;
}

bool HierarchySpace::contains(std::span<const int> j, std::span<const int> q) const {
  return find(j, q) != static_cast<std::size_t>(-1);
}

std::size_t HierarchySpace::index_of(std::span<const int> j,
                                     std::span<const int> q) const {
  const std::size_t flat = find(j, q);
  if (flat != static_cast<std::size_t>(-1)) return flat;

  const int m = static_cast<int>(j.size());
  const int n = static_cast<int>(q.size());
  std::ostringstream msg;
  msg << "hierarchy: key (m=" << m << ", n=" << n << ") not in space: ";
  if (m > opt_.m_max || n > opt_.n_max) {
    msg << "exceeds tier (m_max=" << opt_.m_max << ", n_max=" << opt_.n_max << ")";
  } else {
    AdoIndex probe{m, n, {j.begin(), j.end()}, {q.begin(), q.end()}, Parity::Even, 0};
    if (!always_retained(m, n) &&
        importance(probe, table_) < opt_.importance_threshold)
      msg << "pruned (importance below threshold)";
    else
      msg << "unknown key (check mode ids and canonical ordering)";
  }
  throw NotFoundError(msg.str());
}

std::vector<Neighbor> HierarchySpace::neighbors(const AdoIndex& ado) const {
  std::vector<Neighbor> out;
  std::vector<int> scratch;

  // UpBoson: one move per distinct mode id.
  for (int b = 0; b < K_b(); ++b) {
    scratch = ado.j;
    scratch.insert(std::upper_bound(scratch.begin(), scratch.end(), b), b);
    const std::size_t f = find(scratch, ado.q);
    if (f != static_cast<std::size_t>(-1))
      out.push_back({f, b, 0, 1, Direction::UpBoson});
  }
  // DownBoson: one move per distinct id, with its multiset multiplicity.
  for (std::size_t r = 0; r < ado.j.size();) {
    std::size_t r2 = r;
    while (r2 < ado.j.size() && ado.j[r2] == ado.j[r]) ++r2;
    scratch = ado.j;
    scratch.erase(scratch.begin() + static_cast<std::ptrdiff_t>(r));
    const std::size_t f = find(scratch, ado.q);
    if (f != static_cast<std::size_t>(-1))
      out.push_back({f, ado.j[r], 0, static_cast<int>(r2 - r), Direction::DownBoson});
    r = r2;
  }
  // UpFermion: any mode not in q; position = ascending rank in the target.
  for (int fmode = 0; fmode < K_f(); ++fmode) {
    const auto where = std::lower_bound(ado.q.begin(), ado.q.end(), fmode);
    if (where != ado.q.end() && *where == fmode) continue;
    scratch = ado.q;
    const auto ins = scratch.insert(
        scratch.begin() + (where - ado.q.begin()), fmode);
    const std::size_t f = find(ado.j, scratch);
    if (f != static_cast<std::size_t>(-1))
      out.push_back({f, fmode, static_cast<int>(ins - scratch.begin()) + 1, 1,
                     Direction::UpFermion});
  }
  // DownFermion: remove the w-th smallest id (w = 1-based ascending rank).
  for (std::size_t w = 0; w < ado.q.size(); ++w) {
    scratch = ado.q;
    scratch.erase(scratch.begin() + static_cast<std::ptrdiff_t>(w));
    const std::size_t f = find(ado.j, scratch);
    if (f != static_cast<std::size_t>(-1))
      out.push_back({f, ado.q[w], static_cast<int>(w) + 1, 1,
                     Direction::DownFermion});
  }
  return out;
}

}  // namespace heom
