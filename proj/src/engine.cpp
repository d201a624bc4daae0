#include "aged/engine.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "aged/errors.hpp"
#include "aged/miner.hpp"

namespace aged {

DisagreeSets compute_disagree_and_necessary(const BinaryRelation& b) {
  DisagreeSets out;
  std::size_t nitems = b.cols.size();
  out.per_match.reserve(b.match_count);
  out.per_item_necessary.resize(nitems);

  // Duplicate disagree rows are common; collect distinct rows first, then
  // derive the necessary families from those.
  std::unordered_set<Bitset, BitsetHash> distinct;
  for (std::size_t row = 0; row < b.match_count; ++row) {
    Bitset d = b.rows[row].complement();
    distinct.insert(d);
    out.per_match.push_back(std::move(d));
  }
  std::vector<std::unordered_set<Bitset, BitsetHash>> nec(nitems);
  for (const Bitset& d : distinct) {
    d.for_each_set([&](std::size_t item) {
      Bitset member = d;
      member.reset(item);
      nec[item].insert(std::move(member));
    });
  }
  for (std::size_t i = 0; i < nitems; ++i) {
    out.per_item_necessary[i].assign(nec[i].begin(), nec[i].end());
    std::sort(out.per_item_necessary[i].begin(),
              out.per_item_necessary[i].end());
  }
  return out;
}

std::vector<Bitset> minimize_necessary_set(std::vector<Bitset> nec) {
  std::stable_sort(nec.begin(), nec.end(), [](const Bitset& a, const Bitset& b) {
    std::size_t ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    return a < b;
  });
  std::vector<Bitset> kept;
  for (Bitset& cand : nec) {
    bool dominated = false;
    for (const Bitset& k : kept) {
      if (k.is_subset_of(cand)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(cand));
  }
  return kept;
}

ErrorReport compute_e3(const Bitset& lhs, std::uint32_t rhs,
                       const BinaryRelation& b, const ItemUniverse& universe) {
  if (lhs.size() != 0 && lhs.test(rhs))
    throw Error("compute_e3: rhs contained in lhs");
  ErrorReport r;
  r.match_count = b.match_count;

  Bitset violators = b.cols[rhs].complement();
  bool empty_lhs = true;
  bool has_pair_item = false;
  if (lhs.size() != 0) {
    lhs.for_each_set([&](std::size_t item) {
      empty_lhs = false;
      violators &= b.cols[item];
      ItemKind k = universe.items[item].kind;
      if (k != ItemKind::Constant) has_pair_item = true;
    });
  }
  r.violations = violators.count();
  r.adom = empty_lhs ? 0 : (has_pair_item ? 2 : 1);

  if (r.match_count > r.adom) {
    r.e3 = static_cast<double>(r.violations) /
           static_cast<double>(r.match_count - r.adom);
  } else {
    r.denominator_degenerate = true;
    r.e3 = r.violations == 0 ? 0.0 : 1.0;
  }
  return r;
}

namespace {

// Union-find over equality terms: (variable, attribute) pairs plus constants.
struct TermClasses {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> parent;

  std::size_t node(const std::string& key) {
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    std::size_t id = parent.size();
    index.emplace(key, id);
    parent.push_back(id);
    return id;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }

  static std::string term_key(std::uint32_t var, const std::string& attr) {
    return "t:" + std::to_string(var) + ":" + attr;
  }
  static std::string const_key(const std::string& c) { return "c:" + c; }
};

}  // namespace

bool is_trivial(const Bitset& lhs, std::uint32_t rhs,
                const ItemUniverse& universe) {
  TermClasses uf;
  bool unsatisfiable = false;
  std::unordered_map<std::size_t, std::string> pinned;  // class root -> constant

  auto pin = [&](std::size_t root, const std::string& c) {
    auto it = pinned.find(root);
    if (it == pinned.end()) {
      pinned.emplace(root, c);
    } else if (it->second != c) {
      unsatisfiable = true;
    }
  };

  std::vector<std::uint32_t> members;
  if (lhs.size() != 0)
    lhs.for_each_set([&](std::size_t i) {
      members.push_back(static_cast<std::uint32_t>(i));
    });
  for (std::uint32_t i : members) {
    const Item& item = universe.items[i];
    switch (item.kind) {
      case ItemKind::Constant:
        uf.unite(uf.node(TermClasses::term_key(item.var1, item.attr1)),
                 uf.node(TermClasses::const_key(item.constant)));
        break;
      case ItemKind::Variable:
        uf.unite(uf.node(TermClasses::term_key(item.var1, item.attr1)),
                 uf.node(TermClasses::term_key(item.var2, item.attr2)));
        break;
      case ItemKind::Id:
        uf.unite(uf.node(TermClasses::term_key(item.var1, "id")),
                 uf.node(TermClasses::term_key(item.var2, "id")));
        break;
    }
  }
  // Re-walk constants after all unions so chained classes are checked.
  for (std::uint32_t i : members) {
    const Item& item = universe.items[i];
    if (item.kind == ItemKind::Constant)
      pin(uf.find(uf.node(TermClasses::term_key(item.var1, item.attr1))),
          item.constant);
  }
  // Two distinct constants in one class make the lhs unsatisfiable even
  // without a direct (var, attr) collision.
  {
    std::unordered_map<std::size_t, std::string> seen;
    for (const auto& [key, id] : uf.index) {
      if (key[0] != 'c') continue;
      std::size_t root = uf.find(id);
      auto it = seen.find(root);
      if (it == seen.end())
        seen.emplace(root, key);
      else if (it->second != key)
        unsatisfiable = true;
    }
  }
  if (unsatisfiable) return true;

  const Item& r = universe.items[rhs];
  auto have = [&](const std::string& key) {
    return uf.index.count(key) > 0;
  };
  auto same_class = [&](const std::string& a, const std::string& b) {
    if (!have(a) || !have(b)) return false;
    return uf.find(uf.index.at(a)) == uf.find(uf.index.at(b));
  };
  switch (r.kind) {
    case ItemKind::Constant:
      return same_class(TermClasses::term_key(r.var1, r.attr1),
                        TermClasses::const_key(r.constant));
    case ItemKind::Variable:
      return same_class(TermClasses::term_key(r.var1, r.attr1),
                        TermClasses::term_key(r.var2, r.attr2));
    case ItemKind::Id:
      return same_class(TermClasses::term_key(r.var1, "id"),
                        TermClasses::term_key(r.var2, "id"));
  }
  return false;
}

namespace {

struct Emitted {
  Bitset lhs;
  ErrorReport error;
  bool exact;
};

struct SearchCtx {
  std::uint32_t rhs;
  const BinaryRelation* b;
  const ItemUniverse* universe;
  double epsilon;
  ApproxMode mode;
  std::size_t max_lhs;
  SearchTrace* trace;

  std::vector<Bitset> member_contains;  // per item: members containing it
  std::size_t member_count = 0;
  std::vector<Emitted> exact_out;
  std::vector<Emitted> approx_out;
};

bool passes_epsilon(const ErrorReport& er, double epsilon) {
  // Exact rational comparison: violations / denom <= epsilon.
  if (er.denominator_degenerate) return er.e3 <= epsilon;
  return static_cast<double>(er.violations) <=
         epsilon * static_cast<double>(er.match_count - er.adom);
}

void order_items(const SearchCtx& ctx, const Bitset& remaining,
                 std::vector<std::uint32_t>& items) {
  std::vector<std::pair<std::size_t, std::uint32_t>> scored;
  scored.reserve(items.size());
  for (std::uint32_t i : items)
    scored.emplace_back(ctx.member_contains[i].intersection_count(remaining), i);
  std::stable_sort(scored.begin(), scored.end(),
                   [&](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first > b.first;
                     return ctx.universe->items[a.second].display <
                            ctx.universe->items[b.second].display;
                   });
  items.clear();
  for (auto& [count, i] : scored)
    if (count > 0) items.push_back(i);
}

void try_emit_approx(SearchCtx& ctx, const Bitset& path) {
  ErrorReport er = compute_e3(path, ctx.rhs, *ctx.b, *ctx.universe);
  if (!passes_epsilon(er, ctx.epsilon)) return;
  ctx.approx_out.push_back({path, er, er.violations == 0});
  if (ctx.trace) ++ctx.trace->approx_emitted;
}

// `allowed` is already ordered for this node and restricted to items that
// still cover something in `remaining`.
void dfs(SearchCtx& ctx, const Bitset& remaining,
         const std::vector<std::uint32_t>& allowed, Bitset& path,
         std::size_t depth) {
  if (ctx.trace) ++ctx.trace->nodes;

  if (remaining.none()) {
    if (allowed.empty()) {
      if (ctx.trace) ++ctx.trace->valid_leaves;
      ErrorReport er = compute_e3(path, ctx.rhs, *ctx.b, *ctx.universe);
      ctx.exact_out.push_back({path, er, true});
    } else {
      // Unreachable when allowed is derived from remaining; kept as the
      // non-minimal leaf class for the trace.
      if (ctx.trace) ++ctx.trace->nonminimal_leaves;
    }
    return;
  }
  if (allowed.empty()) {
    if (ctx.trace) ++ctx.trace->invalid_leaves;
    try_emit_approx(ctx, path);
    return;
  }
  if (ctx.mode == ApproxMode::Eager) {
    ErrorReport er = compute_e3(path, ctx.rhs, *ctx.b, *ctx.universe);
    if (passes_epsilon(er, ctx.epsilon)) {
      ctx.approx_out.push_back({path, er, er.violations == 0});
      if (ctx.trace) ++ctx.trace->approx_emitted;
      return;  // prune: any extension is a superset
    }
  }
  if (ctx.max_lhs > 0 && depth >= ctx.max_lhs) {
    if (ctx.trace) ++ctx.trace->invalid_leaves;
    if (ctx.mode == ApproxMode::Leaf) try_emit_approx(ctx, path);
    return;
  }

  for (std::size_t pos = 0; pos < allowed.size(); ++pos) {
    std::uint32_t item = allowed[pos];
    Bitset child_remaining = remaining;
    child_remaining.and_not(ctx.member_contains[item]);
    std::vector<std::uint32_t> child_allowed(allowed.begin() + pos + 1,
                                             allowed.end());
    order_items(ctx, child_remaining, child_allowed);
    path.set(item);
    dfs(ctx, child_remaining, child_allowed, path, depth + 1);
    path.reset(item);
  }
}

}  // namespace

std::vector<CoverRule> search_covers(std::uint32_t rhs,
                                     const std::vector<Bitset>& nec_min,
                                     const BinaryRelation& b,
                                     const ItemUniverse& universe,
                                     double epsilon, ApproxMode mode,
                                     std::size_t max_lhs_size,
                                     SearchTrace* trace) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw ConfigError("epsilon must lie in [0,1]");

  SearchCtx ctx;
  ctx.rhs = rhs;
  ctx.b = &b;
  ctx.universe = &universe;
  ctx.epsilon = epsilon;
  ctx.mode = mode;
  ctx.max_lhs = max_lhs_size;
  ctx.trace = trace;
  ctx.member_count = nec_min.size();

  std::size_t nitems = universe.items.size();
  ctx.member_contains.assign(nitems, Bitset(nec_min.size()));
  Bitset root_remaining(nec_min.size());
  std::vector<bool> occurs(nitems, false);
  for (std::size_t m = 0; m < nec_min.size(); ++m) {
    root_remaining.set(m);
    nec_min[m].for_each_set([&](std::size_t item) {
      ctx.member_contains[item].set(m);
      occurs[item] = true;
    });
  }
  std::vector<std::uint32_t> root_items;
  for (std::uint32_t i = 0; i < nitems; ++i)
    if (occurs[i]) root_items.push_back(i);
  order_items(ctx, root_remaining, root_items);
  if (trace) trace->root_order = root_items;

  Bitset path(nitems);
  dfs(ctx, root_remaining, root_items, path, 0);

  // Final filtering. Exact rules keep only the subset-minimal covers;
  // approximate rules are dropped when any kept lhs is contained in them.
  auto by_size = [](const Emitted& a, const Emitted& b) {
    std::size_t ca = a.lhs.count(), cb = b.lhs.count();
    if (ca != cb) return ca < cb;
    return a.lhs < b.lhs;
  };
  std::sort(ctx.exact_out.begin(), ctx.exact_out.end(), by_size);
  std::vector<Emitted> exact_kept;
  for (Emitted& e : ctx.exact_out) {
    bool dominated = false;
    for (const Emitted& k : exact_kept)
      if (k.lhs.is_subset_of(e.lhs)) {
        dominated = true;
        break;
      }
    if (!dominated) exact_kept.push_back(std::move(e));
  }

  std::sort(ctx.approx_out.begin(), ctx.approx_out.end(), by_size);
  std::vector<Emitted> approx_kept;
  if (mode == ApproxMode::Eager) {
    // Strict minimality across everything emitted.
    std::vector<Emitted> all;
    all.reserve(exact_kept.size() + ctx.approx_out.size());
    for (Emitted& e : exact_kept) all.push_back(std::move(e));
    for (Emitted& e : ctx.approx_out) all.push_back(std::move(e));
    std::sort(all.begin(), all.end(), by_size);
    exact_kept.clear();
    for (Emitted& e : all) {
      bool dominated = false;
      for (const Emitted& k : exact_kept)
        if (k.lhs.is_subset_of(e.lhs)) {
          dominated = true;
          break;
        }
      for (const Emitted& k : approx_kept)
        if (!dominated && k.lhs.is_subset_of(e.lhs)) {
          dominated = true;
          break;
        }
      if (dominated) continue;
      (e.exact ? exact_kept : approx_kept).push_back(std::move(e));
    }
  } else {
    for (Emitted& e : ctx.approx_out) {
      if (e.exact) continue;  // exact rules come from covering leaves
      bool dominated = false;
      for (const Emitted& k : exact_kept)
        if (k.lhs.is_subset_of(e.lhs)) {
          dominated = true;
          break;
        }
      for (const Emitted& k : approx_kept)
        if (!dominated && k.lhs.is_subset_of(e.lhs)) {
          dominated = true;
          break;
        }
      if (!dominated) approx_kept.push_back(std::move(e));
    }
  }

  std::vector<CoverRule> out;
  auto push = [&](Emitted& e) {
    if (is_trivial(e.lhs, rhs, universe)) return;
    out.push_back({std::move(e.lhs), rhs, e.error, e.exact});
  };
  for (Emitted& e : exact_kept) push(e);
  for (Emitted& e : approx_kept) push(e);
  std::sort(out.begin(), out.end(), [](const CoverRule& a, const CoverRule& b) {
    std::size_t ca = a.lhs.count(), cb = b.lhs.count();
    if (ca != cb) return ca < cb;
    return a.lhs < b.lhs;
  });
  return out;
}

std::vector<DiscoveredRule> mine_dependencies(const GraphPattern& q,
                                              const MatchSet& h,
                                              const PropertyGraph& g,
                                              const MineOptions& opts,
                                              std::size_t mni,
                                              MineStats* stats) {
  if (h.matches.empty()) throw Error("mine_dependencies: empty match set");
  ItemUniverse universe = build_items(q, h, g, opts.items);
  std::vector<DiscoveredRule> rules;
  if (universe.items.empty()) return rules;
  BinaryRelation b = build_binary_relation(universe, h, g);
  DisagreeSets d = compute_disagree_and_necessary(b);

  if (stats) {
    stats->item_count = universe.items.size();
    stats->searched_rhs = universe.rhs_candidates.size();
  }
  for (std::uint32_t rhs : universe.rhs_candidates) {
    std::vector<Bitset> nec_min =
        minimize_necessary_set(d.per_item_necessary[rhs]);
    SearchTrace trace;
    auto covers = search_covers(rhs, nec_min, b, universe, opts.epsilon,
                                opts.mode, opts.max_lhs_size, &trace);
    if (stats) stats->nodes += trace.nodes;
    for (CoverRule& c : covers) {
      DiscoveredRule r;
      r.pattern = q;
      c.lhs.for_each_set(
          [&](std::size_t i) { r.lhs.push_back(universe.items[i]); });
      r.rhs = universe.items[rhs];
      r.error = c.error;
      r.exact = c.exact;
      r.mni = mni;
      rules.push_back(std::move(r));
    }
  }
  std::sort(rules.begin(), rules.end(),
            [](const DiscoveredRule& a, const DiscoveredRule& b) {
              if (a.rhs.display != b.rhs.display)
                return a.rhs.display < b.rhs.display;
              if (a.lhs.size() != b.lhs.size()) return a.lhs.size() < b.lhs.size();
              auto da = [](const DiscoveredRule& r) {
                std::string s;
                for (const Item& i : r.lhs) {
                  s += i.display;
                  s += '\x1f';
                }
                return s;
              };
              return da(a) < da(b);
            });
  return rules;
}

namespace {

std::string item_key(const Item& i) {
  std::string s = std::to_string(static_cast<int>(i.kind));
  s += ':';
  s += std::to_string(i.var1);
  s += ':';
  s += std::to_string(i.var2);
  s += ':';
  s += i.attr1;
  s += ':';
  s += i.attr2;
  s += ':';
  s += i.constant;
  return s;
}

// Rewrites an item through a variable mapping, re-normalizing the pair order.
Item map_item(const Item& i, const std::vector<std::uint32_t>& m) {
  Item out = i;
  out.var1 = m[i.var1];
  if (i.kind != ItemKind::Constant) {
    out.var2 = m[i.var2];
    if (out.var1 > out.var2) {
      std::swap(out.var1, out.var2);
      std::swap(out.attr1, out.attr2);
    }
  }
  out.display.clear();
  return out;
}

}  // namespace

std::vector<DiscoveredRule> reduce_rules(std::vector<DiscoveredRule> rules) {
  auto rule_key = [](const DiscoveredRule& r) {
    std::string s = r.pattern.serialize();
    s += '|';
    s += r.rhs.display;
    s += '|';
    s += std::to_string(r.lhs.size());
    for (const Item& i : r.lhs) {
      s += '|';
      s += i.display;
    }
    return s;
  };
  std::sort(rules.begin(), rules.end(),
            [&](const DiscoveredRule& a, const DiscoveredRule& b) {
              if (a.pattern.edges.size() != b.pattern.edges.size())
                return a.pattern.edges.size() < b.pattern.edges.size();
              if (a.lhs.size() != b.lhs.size()) return a.lhs.size() < b.lhs.size();
              return rule_key(a) < rule_key(b);
            });
  rules.erase(std::unique(rules.begin(), rules.end(),
                          [&](const DiscoveredRule& a, const DiscoveredRule& b) {
                            return rule_key(a) == rule_key(b);
                          }),
              rules.end());

  // Cache the mapping sets per ordered pattern pair.
  std::map<std::pair<std::string, std::string>,
           std::vector<std::vector<std::uint32_t>>>
      mappings_cache;
  auto mappings_for = [&](const GraphPattern& weak, const GraphPattern& strong)
      -> const std::vector<std::vector<std::uint32_t>>& {
    auto key = std::make_pair(weak.serialize(), strong.serialize());
    auto it = mappings_cache.find(key);
    if (it == mappings_cache.end())
      it = mappings_cache.emplace(key, reduction_mappings(weak, strong)).first;
    return it->second;
  };

  std::vector<std::string> pattern_codes(rules.size());
  std::vector<std::unordered_set<std::string>> lhs_keys(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    pattern_codes[i] = canonical_code(rules[i].pattern);
    for (const Item& it : rules[i].lhs) lhs_keys[i].insert(item_key(it));
  }

  // a dominates b when some variable mapping carries a's rhs onto b's rhs and
  // a's lhs into b's lhs; across strictly weaker patterns only exact rules
  // count as witnesses.
  auto dominates = [&](std::size_t a, std::size_t b) {
    const DiscoveredRule& ra = rules[a];
    const DiscoveredRule& rb = rules[b];
    bool same_pattern = pattern_codes[a] == pattern_codes[b];
    if (!same_pattern && !ra.exact) return false;
    if (ra.lhs.size() > rb.lhs.size()) return false;
    for (const auto& m : mappings_for(ra.pattern, rb.pattern)) {
      if (item_key(map_item(ra.rhs, m)) != item_key(rb.rhs)) continue;
      bool subset = true;
      for (const Item& i : ra.lhs) {
        if (!lhs_keys[b].count(item_key(map_item(i, m)))) {
          subset = false;
          break;
        }
      }
      if (subset) return true;
    }
    return false;
  };

  std::vector<DiscoveredRule> kept;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < rules.size() && !drop; ++j) {
      if (i == j) continue;
      if (!dominates(j, i)) continue;
      // Mutually dominating rules are equivalent; the smaller key survives.
      if (dominates(i, j) && j > i) continue;
      drop = true;
    }
    if (!drop) kept.push_back(rules[i]);
  }
  return kept;
}

}  // namespace aged
