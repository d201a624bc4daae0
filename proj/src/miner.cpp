#include "aged/miner.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "aged/errors.hpp"
#include "aged/log.hpp"

namespace aged {

namespace {

std::string code_under(const GraphPattern& p,
                       const std::vector<std::uint32_t>& perm) {
  // perm maps old index -> new index.
  std::vector<std::string> labels(p.vars.size());
  for (std::uint32_t i = 0; i < p.vars.size(); ++i)
    labels[perm[i]] = p.vars[i].label;
  std::vector<std::tuple<std::uint32_t, std::string, std::uint32_t>> edges;
  edges.reserve(p.edges.size());
  for (const GraphPattern::Edge& e : p.edges)
    edges.emplace_back(perm[e.src], e.label, perm[e.dst]);
  std::sort(edges.begin(), edges.end());
  std::string out = "V";
  for (const std::string& l : labels) {
    out += ' ';
    out += l;
  }
  out += "|E";
  for (const auto& [s, l, d] : edges) {
    out += ' ';
    out += std::to_string(s);
    out += ' ';
    out += l;
    out += ' ';
    out += std::to_string(d);
  }
  return out;
}

std::vector<std::uint32_t> minimizing_permutation(const GraphPattern& p) {
  std::vector<std::uint32_t> perm(p.vars.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint32_t> best = perm;
  std::string best_code = code_under(p, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::string code = code_under(p, perm);
    if (code < best_code) {
      best_code = std::move(code);
      best = perm;
    }
  }
  return best;
}

void find_embeddings(const GraphPattern& q, const GraphPattern& q2,
                     bool stop_at_first,
                     std::vector<std::vector<std::uint32_t>>& out) {
  if (q.vars.size() > q2.vars.size() || q.edges.size() > q2.edges.size())
    return;
  std::set<GraphPattern::Edge> q2_edges(q2.edges.begin(), q2.edges.end());
  auto label_ok = [](const std::string& weak, const std::string& strong) {
    return weak == strong || weak == kWildcard;
  };
  std::vector<std::uint32_t> map(q.vars.size(), UINT32_MAX);
  std::vector<bool> used(q2.vars.size(), false);

  auto edge_ok = [&](const GraphPattern::Edge& e) {
    if (map[e.src] == UINT32_MAX || map[e.dst] == UINT32_MAX) return true;
    if (e.label == kWildcard) {
      for (const GraphPattern::Edge& e2 : q2.edges)
        if (e2.src == map[e.src] && e2.dst == map[e.dst]) return true;
      return false;
    }
    return q2_edges.count({map[e.src], map[e.dst], e.label}) > 0;
  };

  std::function<bool(std::uint32_t)> rec = [&](std::uint32_t v) -> bool {
    if (v == q.vars.size()) {
      out.push_back(map);
      return stop_at_first;
    }
    for (std::uint32_t t = 0; t < q2.vars.size(); ++t) {
      if (used[t]) continue;
      if (!label_ok(q.vars[v].label, q2.vars[t].label)) continue;
      map[v] = t;
      used[t] = true;
      bool ok = true;
      for (const GraphPattern::Edge& e : q.edges) {
        if ((e.src == v || e.dst == v) && !edge_ok(e)) {
          ok = false;
          break;
        }
      }
      if (ok && rec(v + 1)) return true;
      used[t] = false;
      map[v] = UINT32_MAX;
    }
    return false;
  };
  rec(0);
}

}  // namespace

std::string canonical_code(const GraphPattern& p) {
  return code_under(p, minimizing_permutation(p));
}

GraphPattern canonical_form(const GraphPattern& p) {
  auto perm = minimizing_permutation(p);
  GraphPattern out;
  out.name = p.name;
  out.vars.resize(p.vars.size());
  for (std::uint32_t i = 0; i < p.vars.size(); ++i)
    out.vars[perm[i]] = {"x" + std::to_string(perm[i]), p.vars[i].label};
  for (const GraphPattern::Edge& e : p.edges)
    out.edges.push_back({perm[e.src], perm[e.dst], e.label});
  out.normalize();
  return out;
}

std::vector<std::vector<std::uint32_t>> reduction_mappings(
    const GraphPattern& q, const GraphPattern& q2) {
  std::vector<std::vector<std::uint32_t>> out;
  find_embeddings(q, q2, /*stop_at_first=*/false, out);
  return out;
}

bool pattern_reduces(const GraphPattern& q, const GraphPattern& q2) {
  if (canonical_code(q) == canonical_code(q2)) return false;
  std::vector<std::vector<std::uint32_t>> found;
  find_embeddings(q, q2, /*stop_at_first=*/true, found);
  return !found.empty();
}

PatternSet mine_frequent_patterns(const PropertyGraph& g, std::size_t tau,
                                  std::size_t max_edges,
                                  std::size_t match_cap) {
  if (tau < 1) throw ConfigError("tau must be at least 1");
  if (max_edges < 1) throw ConfigError("max_edges must be at least 1");

  auto signatures = g.edge_signatures();
  PatternSet result;
  // canonical code -> pattern, for the current level.
  std::map<std::string, GraphPattern> frontier;
  std::set<std::string> frequent_codes;  // across all levels
  std::set<std::string> evaluated;

  auto evaluate = [&](const GraphPattern& cand, const std::string& code,
                      std::map<std::string, GraphPattern>& next) {
    if (!evaluated.insert(code).second) return;
    MniReport mni = compute_mni(cand, g, match_cap);
    if (mni.mni >= tau) {
      frequent_codes.insert(code);
      GraphPattern canon = canonical_form(cand);
      next.emplace(code, canon);
      result.patterns.push_back({std::move(canon), std::move(mni)});
    }
  };

  // Level 1: one pattern per distinct labeled edge signature.
  {
    std::map<std::string, GraphPattern> next;
    for (const auto& [sl, el, dl] : signatures) {
      GraphPattern p;
      p.vars.push_back({"x0", sl});
      p.vars.push_back({"x1", dl});
      p.edges.push_back({0, 1, el});
      p.normalize();
      evaluate(p, canonical_code(p), next);
    }
    frontier = std::move(next);
  }

  for (std::size_t level = 2; level <= max_edges && !frontier.empty();
       ++level) {
    // Candidate generation: extend every frontier pattern by one edge.
    std::map<std::string, GraphPattern> candidates;
    for (const auto& [code, p] : frontier) {
      auto add_candidate = [&](GraphPattern cand) {
        cand.normalize();
        if (cand.edges.size() != level) return;  // duplicate edge collapsed
        std::string ccode = canonical_code(cand);
        candidates.emplace(std::move(ccode), std::move(cand));
      };
      for (std::uint32_t v = 0; v < p.vars.size(); ++v) {
        for (const auto& [sl, el, dl] : signatures) {
          if (p.vars[v].label == sl) {
            GraphPattern cand = p;
            cand.vars.push_back(
                {"x" + std::to_string(cand.vars.size()), dl});
            cand.edges.push_back(
                {v, static_cast<std::uint32_t>(cand.vars.size() - 1), el});
            add_candidate(std::move(cand));
          }
          if (p.vars[v].label == dl) {
            GraphPattern cand = p;
            cand.vars.push_back(
                {"x" + std::to_string(cand.vars.size()), sl});
            cand.edges.push_back(
                {static_cast<std::uint32_t>(cand.vars.size() - 1), v, el});
            add_candidate(std::move(cand));
          }
        }
        for (std::uint32_t w = 0; w < p.vars.size(); ++w) {
          if (v == w) continue;
          for (const auto& [sl, el, dl] : signatures) {
            if (p.vars[v].label != sl || p.vars[w].label != dl) continue;
            GraphPattern cand = p;
            cand.edges.push_back({v, w, el});
            add_candidate(std::move(cand));
          }
        }
      }
    }

    // Anti-monotone pruning: every connected (level-1)-edge sub-pattern must
    // be frequent.
    std::map<std::string, GraphPattern> next;
    for (const auto& [code, cand] : candidates) {
      bool prune = false;
      for (std::size_t drop = 0; drop < cand.edges.size() && !prune; ++drop) {
        GraphPattern sub;
        std::vector<std::uint32_t> remap(cand.vars.size(), UINT32_MAX);
        std::vector<bool> keep_var(cand.vars.size(), false);
        for (std::size_t e = 0; e < cand.edges.size(); ++e) {
          if (e == drop) continue;
          keep_var[cand.edges[e].src] = true;
          keep_var[cand.edges[e].dst] = true;
        }
        for (std::uint32_t v = 0; v < cand.vars.size(); ++v) {
          if (!keep_var[v]) continue;
          remap[v] = static_cast<std::uint32_t>(sub.vars.size());
          sub.vars.push_back(cand.vars[v]);
        }
        for (std::size_t e = 0; e < cand.edges.size(); ++e) {
          if (e == drop) continue;
          sub.edges.push_back({remap[cand.edges[e].src],
                               remap[cand.edges[e].dst], cand.edges[e].label});
        }
        sub.normalize();
        if (!sub.is_connected()) continue;  // not a usable sub-pattern
        if (!frequent_codes.count(canonical_code(sub))) prune = true;
      }
      if (!prune) evaluate(cand, code, next);
    }
    frontier = std::move(next);
  }

  std::sort(result.patterns.begin(), result.patterns.end(),
            [](const RankedPattern& a, const RankedPattern& b) {
              if (a.pattern.edges.size() != b.pattern.edges.size())
                return a.pattern.edges.size() < b.pattern.edges.size();
              return canonical_code(a.pattern) < canonical_code(b.pattern);
            });
  log_info("mined " + std::to_string(result.patterns.size()) +
           " frequent patterns (tau=" + std::to_string(tau) + ")");
  return result;
}

PatternSet reduce_patterns(PatternSet ps) {
  // Collapse isomorphic duplicates, keeping the smallest serialization.
  std::map<std::string, RankedPattern> by_code;
  for (auto& rp : ps.patterns) {
    std::string code = canonical_code(rp.pattern);
    auto it = by_code.find(code);
    if (it == by_code.end()) {
      by_code.emplace(std::move(code), std::move(rp));
    } else if (rp.pattern.serialize() < it->second.pattern.serialize()) {
      it->second = std::move(rp);
    }
  }
  std::vector<RankedPattern> unique;
  unique.reserve(by_code.size());
  for (auto& [code, rp] : by_code) unique.push_back(std::move(rp));

  PatternSet out;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    bool reduced = false;
    for (std::size_t j = 0; j < unique.size() && !reduced; ++j) {
      if (i == j) continue;
      if (pattern_reduces(unique[j].pattern, unique[i].pattern)) reduced = true;
    }
    if (!reduced) out.patterns.push_back(std::move(unique[i]));
  }
  std::sort(out.patterns.begin(), out.patterns.end(),
            [](const RankedPattern& a, const RankedPattern& b) {
              if (a.pattern.edges.size() != b.pattern.edges.size())
                return a.pattern.edges.size() < b.pattern.edges.size();
              return canonical_code(a.pattern) < canonical_code(b.pattern);
            });
  return out;
}

}  // namespace aged
