#include "aged/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "aged/errors.hpp"

namespace aged {
namespace oracle {

namespace {

bool row_satisfies(const BinaryRelation& b, std::size_t row, const Bitset& lhs) {
  bool ok = true;
  lhs.for_each_set([&](std::size_t item) {
    if (!b.rows[row].test(item)) ok = false;
  });
  return ok;
}

}  // namespace

ErrorReport naive_e3(const Bitset& lhs, std::uint32_t rhs,
                     const BinaryRelation& b, const ItemUniverse& universe) {
  ErrorReport r;
  r.match_count = b.match_count;
  bool empty = true, pair_item = false;
  lhs.for_each_set([&](std::size_t item) {
    empty = false;
    if (universe.items[item].kind != ItemKind::Constant) pair_item = true;
  });
  r.adom = empty ? 0 : (pair_item ? 2 : 1);
  for (std::size_t row = 0; row < b.match_count; ++row) {
    if (row_satisfies(b, row, lhs) && !b.rows[row].test(rhs)) ++r.violations;
  }
  if (r.match_count > r.adom) {
    r.e3 = static_cast<double>(r.violations) /
           static_cast<double>(r.match_count - r.adom);
  } else {
    r.denominator_degenerate = true;
    r.e3 = r.violations == 0 ? 0.0 : 1.0;
  }
  return r;
}

std::vector<Bitset> brute_force_minimal_lhs(std::uint32_t rhs,
                                            const BinaryRelation& b,
                                            const ItemUniverse& universe,
                                            double epsilon,
                                            std::size_t max_size) {
  std::size_t nitems = universe.items.size();
  if (nitems == 0 || max_size > nitems - 1)
    throw Error("brute_force_minimal_lhs: max_size out of range");

  std::vector<std::uint32_t> others;
  for (std::uint32_t i = 0; i < nitems; ++i)
    if (i != rhs) others.push_back(i);

  auto passes = [&](const Bitset& lhs) {
    ErrorReport er = naive_e3(lhs, rhs, b, universe);
    if (er.denominator_degenerate) return er.e3 <= epsilon;
    return static_cast<double>(er.violations) <=
           epsilon * static_cast<double>(er.match_count - er.adom);
  };

  std::vector<Bitset> kept;
  std::vector<std::uint32_t> combo;
  // Size-ascending subset enumeration; supersets of kept sets are skipped.
  for (std::size_t size = 0; size <= max_size; ++size) {
    combo.assign(size, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos,
                                                            std::size_t start) {
      if (pos == size) {
        Bitset lhs(nitems);
        for (std::size_t k = 0; k < size; ++k) lhs.set(others[combo[k]]);
        for (const Bitset& old : kept)
          if (old.is_subset_of(lhs)) return;
        if (passes(lhs)) kept.push_back(std::move(lhs));
        return;
      }
      for (std::size_t i = start; i + (size - pos - 1) < others.size(); ++i) {
        combo[pos] = static_cast<std::uint32_t>(i);
        rec(pos + 1, i + 1);
      }
    };
    rec(0, 0);
  }
  std::sort(kept.begin(), kept.end(), [](const Bitset& a, const Bitset& b) {
    std::size_t ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    return a < b;
  });
  return kept;
}

MniReport brute_force_mni(const GraphPattern& q, const PropertyGraph& g) {
  if (q.vars.size() > 4)
    throw Error("brute_force_mni: pattern too large (max 4 variables)");
  if (g.node_count() > 40)
    throw Error("brute_force_mni: graph too large (max 40 nodes)");

  std::size_t n = q.vars.size();
  std::vector<std::set<NodeIndex>> domains(n);
  std::vector<NodeIndex> assignment(n, 0);

  auto valid = [&]() {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (assignment[i] == assignment[j]) return false;
    return match_satisfies(q, g, assignment);
  };

  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == n) {
      if (valid())
        for (std::size_t i = 0; i < n; ++i) domains[i].insert(assignment[i]);
      return;
    }
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
      assignment[pos] = v;
      rec(pos + 1);
    }
  };
  rec(0);

  MniReport report;
  report.domains.resize(n);
  report.mni = n == 0 ? 0 : SIZE_MAX;
  for (std::size_t i = 0; i < n; ++i) {
    for (NodeIndex v : domains[i]) report.domains[i].push_back(g.node(v).id);
    report.mni = std::min(report.mni, report.domains[i].size());
  }
  if (report.mni == SIZE_MAX) report.mni = 0;
  return report;
}

std::size_t brute_force_max_satisfying_subset(const Bitset& lhs,
                                              std::uint32_t rhs,
                                              const BinaryRelation& b) {
  if (b.match_count > 12)
    throw Error("brute_force_max_satisfying_subset: |H| > 12");
  std::size_t n = b.match_count;
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    bool ok = true;
    std::size_t size = 0;
    for (std::size_t row = 0; row < n && ok; ++row) {
      if (!(mask & (std::size_t{1} << row))) continue;
      ++size;
      // A member match must not violate lhs -> rhs.
      if (row_satisfies(b, row, lhs) && !b.rows[row].test(rhs)) ok = false;
    }
    if (ok) best = std::max(best, size);
  }
  return best;
}

}  // namespace oracle
}  // namespace aged
