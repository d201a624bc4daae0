#include "aged/matcher.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "aged/errors.hpp"

namespace aged {

namespace {

struct VarLabel {
  bool wildcard = false;
  bool missing = false;  // concrete label absent from the graph
  LabelId id = 0;
};

struct CompiledEdge {
  std::uint32_t src, dst;
  bool wildcard = false;
  bool missing = false;
  LabelId label = 0;
};

struct AnchorEdge {
  // Edge between the current variable and an already assigned one.
  std::uint32_t other_var;
  bool outgoing;  // true: current -> other, false: other -> current
  bool wildcard;
  LabelId label;
};

struct Compiled {
  const GraphPattern* pattern;
  std::vector<VarLabel> var_labels;
  std::vector<CompiledEdge> edges;
  bool impossible = false;

  std::vector<std::uint32_t> order;             // search order (var indices)
  std::vector<std::vector<AnchorEdge>> anchors; // per order position
  // Self-loop pattern edges, keyed by variable: (wildcard, label).
  std::vector<std::vector<std::pair<bool, LabelId>>> loops;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> swap_pairs;
  std::vector<std::vector<std::uint32_t>> automorphisms;
};

VarLabel resolve_label(const std::string& label, const PropertyGraph& g) {
  VarLabel out;
  if (label == kWildcard) {
    out.wildcard = true;
    return out;
  }
  auto id = g.find_label(label);
  if (!id) {
    out.missing = true;
    return out;
  }
  out.id = *id;
  return out;
}

Compiled compile(const GraphPattern& q, const PropertyGraph& g,
                 bool symmetry_breaking) {
  Compiled c;
  c.pattern = &q;
  for (const PatternVar& v : q.vars)
    c.var_labels.push_back(resolve_label(v.label, g));
  for (const GraphPattern::Edge& e : q.edges) {
    VarLabel l = resolve_label(e.label, g);
    CompiledEdge ce{e.src, e.dst, l.wildcard, l.missing, l.id};
    if (ce.missing) c.impossible = true;
    c.edges.push_back(ce);
  }
  for (const VarLabel& vl : c.var_labels)
    if (vl.missing) c.impossible = true;
  if (c.impossible) return c;

  // Search order: highest (degree, -selectivity) first, then grow along
  // pattern adjacency so every later variable has at least one anchor.
  auto candidate_count = [&](std::uint32_t v) -> std::size_t {
    return c.var_labels[v].wildcard ? g.node_count()
                                    : g.nodes_with_label(c.var_labels[v].id).size();
  };
  std::uint32_t n = static_cast<std::uint32_t>(q.vars.size());
  std::vector<bool> placed(n, false);
  auto better_start = [&](std::uint32_t a, std::uint32_t b) {
    auto da = q.degree(a), db = q.degree(b);
    if (da != db) return da > db;
    auto ca = candidate_count(a), cb = candidate_count(b);
    if (ca != cb) return ca < cb;
    return a < b;
  };
  std::uint32_t start = 0;
  for (std::uint32_t v = 1; v < n; ++v)
    if (better_start(v, start)) start = v;
  c.order.push_back(start);
  placed[start] = true;
  while (c.order.size() < n) {
    std::int64_t best_links = -1;
    std::uint32_t best = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (placed[v]) continue;
      std::int64_t links = 0;
      for (const CompiledEdge& e : c.edges) {
        if (e.src == v && placed[e.dst]) ++links;
        if (e.dst == v && placed[e.src]) ++links;
      }
      if (links == 0) continue;  // pattern connected: reachable later
      if (links > best_links ||
          (links == best_links && better_start(v, best))) {
        best_links = links;
        best = v;
      }
    }
    if (best_links < 0)
      throw ConfigError("pattern must be connected for matching");
    c.order.push_back(best);
    placed[best] = true;
  }

  c.anchors.resize(n);
  c.loops.resize(n);
  std::vector<bool> assigned(n, false);
  for (const CompiledEdge& e : c.edges)
    if (e.src == e.dst) c.loops[e.src].emplace_back(e.wildcard, e.label);
  for (std::size_t pos = 0; pos < c.order.size(); ++pos) {
    std::uint32_t v = c.order[pos];
    for (const CompiledEdge& e : c.edges) {
      if (e.src == e.dst) continue;
      if (e.src == v && assigned[e.dst])
        c.anchors[pos].push_back({e.dst, true, e.wildcard, e.label});
      else if (e.dst == v && assigned[e.src])
        c.anchors[pos].push_back({e.src, false, e.wildcard, e.label});
    }
    assigned[v] = true;
  }

  if (symmetry_breaking) {
    c.automorphisms = pattern_automorphisms(q);
    for (const auto& perm : c.automorphisms) {
      // Transpositions give a cheap in-search ordering constraint.
      std::vector<std::uint32_t> moved;
      for (std::uint32_t i = 0; i < perm.size(); ++i)
        if (perm[i] != i) moved.push_back(i);
      if (moved.size() == 2)
        c.swap_pairs.emplace_back(moved[0], moved[1]);
    }
  }
  return c;
}

bool node_label_ok(const VarLabel& vl, const PropertyGraph& g, NodeIndex n) {
  return vl.wildcard || g.node_label_id(n) == vl.id;
}

// Keep a match only if its declaration-order tuple is strictly smaller than
// every automorphic image.
bool lex_min_under(const std::vector<std::vector<std::uint32_t>>& autos,
                   const std::vector<NodeIndex>& a) {
  for (const auto& perm : autos) {
    bool strictly_less = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      NodeIndex mine = a[i];
      NodeIndex theirs = a[perm[i]];
      if (mine < theirs) {
        strictly_less = true;
        break;
      }
      if (mine > theirs) break;
    }
    if (!strictly_less) return false;
  }
  return true;
}

template <typename Emit>
void enumerate(const Compiled& c, const PropertyGraph& g, bool injective,
               bool symmetry, Emit emit) {
  if (c.impossible || c.pattern->vars.size() == 0) return;
  std::uint32_t n = static_cast<std::uint32_t>(c.pattern->vars.size());
  std::vector<NodeIndex> assignment(n, 0);
  std::vector<bool> used(g.node_count(), false);

  auto order_ok = [&](std::size_t pos) {
    if (!symmetry) return true;
    std::uint32_t v = c.order[pos];
    for (auto [i, j] : c.swap_pairs) {
      std::uint32_t other = (v == i) ? j : (v == j) ? i : n;
      if (other == n) continue;
      // Both endpoints assigned once `other` precedes `v` in the order.
      bool other_assigned = false;
      for (std::size_t p = 0; p < pos; ++p)
        if (c.order[p] == other) other_assigned = true;
      if (!other_assigned) continue;
      if (!(assignment[i] < assignment[j])) return false;
    }
    return true;
  };

  auto consistent = [&](std::size_t pos, NodeIndex cand) {
    std::uint32_t v = c.order[pos];
    if (!node_label_ok(c.var_labels[v], g, cand)) return false;
    if (injective && used[cand]) return false;
    for (const auto& [wildcard, label] : c.loops[v]) {
      std::optional<LabelId> lbl =
          wildcard ? std::nullopt : std::optional<LabelId>(label);
      if (!g.has_edge(cand, lbl, cand)) return false;
    }
    for (const AnchorEdge& a : c.anchors[pos]) {
      NodeIndex other = assignment[a.other_var];
      std::optional<LabelId> lbl =
          a.wildcard ? std::nullopt : std::optional<LabelId>(a.label);
      bool ok = a.outgoing ? g.has_edge(cand, lbl, other)
                           : g.has_edge(other, lbl, cand);
      if (!ok) return false;
    }
    return true;
  };

  // Iterative depth-first search over the ordered variables.
  struct Frame {
    std::vector<NodeIndex> cands;
    std::size_t next = 0;
  };
  std::vector<Frame> stack(n);

  auto fill_candidates = [&](std::size_t pos, Frame& f) {
    f.cands.clear();
    f.next = 0;
    std::uint32_t v = c.order[pos];
    if (c.anchors[pos].empty()) {
      if (c.var_labels[v].wildcard) {
        f.cands.resize(g.node_count());
        std::iota(f.cands.begin(), f.cands.end(), NodeIndex{0});
      } else {
        auto span = g.nodes_with_label(c.var_labels[v].id);
        f.cands.assign(span.begin(), span.end());
      }
      return;
    }
    // Seed from the first anchor's adjacency, then verify the rest inside
    // consistent().
    const AnchorEdge& a = c.anchors[pos][0];
    NodeIndex other = assignment[a.other_var];
    auto edges = a.outgoing ? g.in_edges(other) : g.out_edges(other);
    // a.outgoing means pattern edge v -> other, so candidates are in-neighbors
    // of `other`; otherwise out-neighbors.
    for (const AdjEdge& e : edges) {
      if (!a.wildcard && e.label != a.label) continue;
      f.cands.push_back(e.other);
    }
    std::sort(f.cands.begin(), f.cands.end());
    f.cands.erase(std::unique(f.cands.begin(), f.cands.end()), f.cands.end());
  };

  std::size_t pos = 0;
  fill_candidates(0, stack[0]);
  while (true) {
    Frame& f = stack[pos];
    bool descended = false;
    while (f.next < f.cands.size()) {
      NodeIndex cand = f.cands[f.next++];
      if (!consistent(pos, cand)) continue;
      std::uint32_t v = c.order[pos];
      assignment[v] = cand;
      if (!order_ok(pos)) continue;
      if (pos + 1 == n) {
        if (!symmetry || lex_min_under(c.automorphisms, assignment))
          emit(assignment);
        continue;
      }
      if (injective) used[cand] = true;
      ++pos;
      fill_candidates(pos, stack[pos]);
      descended = true;
      break;
    }
    if (descended) continue;
    if (pos == 0) break;
    --pos;
    if (injective) used[assignment[c.order[pos]]] = false;
  }
}

}  // namespace

std::vector<std::vector<std::uint32_t>> pattern_automorphisms(
    const GraphPattern& q) {
  std::uint32_t n = static_cast<std::uint32_t>(q.vars.size());
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::set<GraphPattern::Edge> edge_set(q.edges.begin(), q.edges.end());
  std::vector<std::vector<std::uint32_t>> out;
  do {
    bool identity = true;
    bool ok = true;
    for (std::uint32_t i = 0; i < n && ok; ++i) {
      if (perm[i] != i) identity = false;
      if (q.vars[i].label != q.vars[perm[i]].label) ok = false;
    }
    if (!ok || identity) continue;
    for (const GraphPattern::Edge& e : q.edges) {
      if (!edge_set.count({perm[e.src], perm[e.dst], e.label})) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool match_satisfies(const GraphPattern& q, const PropertyGraph& g,
                     const std::vector<NodeIndex>& assignment) {
  if (assignment.size() != q.vars.size()) return false;
  for (std::size_t i = 0; i < q.vars.size(); ++i) {
    if (assignment[i] >= g.node_count()) return false;
    const std::string& nl = g.node(assignment[i]).label;
    if (!labels_match(q.vars[i].label, nl)) return false;
  }
  for (const GraphPattern::Edge& e : q.edges) {
    NodeIndex src = assignment[e.src], dst = assignment[e.dst];
    bool found = false;
    for (const AdjEdge& ge : g.out_edges(src)) {
      if (ge.other != dst) continue;
      if (labels_match(e.label, g.label_name(ge.label))) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

MatchSet find_homomorphisms(const GraphPattern& q, const PropertyGraph& g,
                            const MatchOptions& opts) {
  MatchSet ms;
  ms.pattern = q;
  Compiled c = compile(q, g, opts.symmetry_breaking);
  enumerate(c, g, /*injective=*/false, opts.symmetry_breaking,
            [&](const std::vector<NodeIndex>& a) {
              if (ms.matches.size() >= opts.match_cap)
                throw CapExceeded("match enumeration cap (" +
                                  std::to_string(opts.match_cap) +
                                  ") exceeded for pattern " + q.name);
              ms.matches.push_back(a);
            });
  std::sort(ms.matches.begin(), ms.matches.end());
  return ms;
}

MniReport compute_mni(const GraphPattern& q, const PropertyGraph& g,
                      std::size_t match_cap) {
  MniReport report;
  std::vector<std::set<NodeIndex>> domains(q.vars.size());
  Compiled c = compile(q, g, /*symmetry_breaking=*/false);
  std::size_t seen = 0;
  enumerate(c, g, /*injective=*/true, /*symmetry=*/false,
            [&](const std::vector<NodeIndex>& a) {
              if (++seen > match_cap)
                throw CapExceeded("match enumeration cap (" +
                                  std::to_string(match_cap) +
                                  ") exceeded for pattern " + q.name);
              for (std::size_t i = 0; i < a.size(); ++i) domains[i].insert(a[i]);
            });
  report.domains.resize(q.vars.size());
  report.mni = q.vars.empty() ? 0 : SIZE_MAX;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    for (NodeIndex n : domains[i]) report.domains[i].push_back(g.node(n).id);
    report.mni = std::min(report.mni, report.domains[i].size());
  }
  if (report.mni == SIZE_MAX) report.mni = 0;
  return report;
}

bool is_persistent(const GraphPattern& q, const PropertyGraph& g,
                   std::size_t tau, std::size_t match_cap) {
  if (tau < 1) throw ConfigError("tau must be at least 1");
  return compute_mni(q, g, match_cap).mni >= tau;
}

std::vector<std::vector<NodeId>> external_matches(const MatchSet& ms,
                                                  const PropertyGraph& g) {
  std::vector<std::vector<NodeId>> out;
  out.reserve(ms.matches.size());
  for (const auto& m : ms.matches) {
    std::vector<NodeId> row;
    row.reserve(m.size());
    for (NodeIndex n : m) row.push_back(g.node(n).id);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace aged
