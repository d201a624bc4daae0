#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aged/bitset.hpp"
#include "aged/graph.hpp"
#include "aged/items.hpp"
#include "aged/matcher.hpp"

namespace aged {

// Disagree sets per match and necessary-set families per item, both built in
// one scan of the binary relation. per_item_necessary[i] is deduplicated; it
// may contain the empty set when some match fails only item i.
struct DisagreeSets {
  std::vector<Bitset> per_match;                        // item-width bitsets
  std::vector<std::vector<Bitset>> per_item_necessary;  // indexed by item
};

DisagreeSets compute_disagree_and_necessary(const BinaryRelation& b);

// Keeps exactly the subset-minimal members; duplicates collapse.
std::vector<Bitset> minimize_necessary_set(std::vector<Bitset> nec);

struct ErrorReport {
  std::size_t violations = 0;  // matches satisfying lhs but not rhs
  std::size_t match_count = 0;
  std::size_t adom = 0;
  double e3 = 0.0;
  bool denominator_degenerate = false;
};

// adom: 0 for an empty lhs, 2 if it holds any variable or id item, else 1.
// When |H| <= adom the ratio is degenerate: e3 is 0 iff there are no
// violations, 1 otherwise, with the flag set.
ErrorReport compute_e3(const Bitset& lhs, std::uint32_t rhs,
                       const BinaryRelation& b, const ItemUniverse& universe);

// True iff the lhs is unsatisfiable (some equality class pins two distinct
// constants) or the rhs literal already follows from the lhs by transitivity
// of equality over (variable, attribute) terms and constants. Id items equate
// the id terms of their two variables.
bool is_trivial(const Bitset& lhs, std::uint32_t rhs,
                const ItemUniverse& universe);

enum class ApproxMode { Leaf, Eager };

inline const char* to_string(ApproxMode m) {
  return m == ApproxMode::Leaf ? "leaf" : "eager";
}

struct SearchTrace {
  std::vector<std::uint32_t> root_order;  // item indices, root ordering
  std::size_t nodes = 0;
  std::size_t valid_leaves = 0;
  std::size_t nonminimal_leaves = 0;
  std::size_t invalid_leaves = 0;
  std::size_t approx_emitted = 0;
};

struct CoverRule {
  Bitset lhs;  // item-index set
  std::uint32_t rhs = 0;
  ErrorReport error;
  bool exact = false;
};

// Depth-first left-to-right search over the candidate lattice rooted at the
// minimal necessary set of rhs. Yields exact rules at fully-covering leaves;
// invalid leaves (and, in eager mode, every node) are tested against epsilon.
// max_lhs_size 0 means unbounded.
std::vector<CoverRule> search_covers(std::uint32_t rhs,
                                     const std::vector<Bitset>& nec_min,
                                     const BinaryRelation& b,
                                     const ItemUniverse& universe,
                                     double epsilon, ApproxMode mode,
                                     std::size_t max_lhs_size = 0,
                                     SearchTrace* trace = nullptr);

struct DiscoveredRule {
  GraphPattern pattern;
  std::vector<Item> lhs;  // in universe order
  Item rhs;
  ErrorReport error;
  bool exact = false;
  std::size_t mni = 0;
};

struct MineOptions {
  double epsilon = 0.0;
  ApproxMode mode = ApproxMode::Leaf;
  BuildItemOptions items;
  std::size_t max_lhs_size = 0;
};

struct MineStats {
  std::size_t item_count = 0;
  std::size_t searched_rhs = 0;
  std::size_t nodes = 0;
};

std::vector<DiscoveredRule> mine_dependencies(const GraphPattern& q,
                                              const MatchSet& h,
                                              const PropertyGraph& g,
                                              const MineOptions& opts,
                                              std::size_t mni = 0,
                                              MineStats* stats = nullptr);

// Cross-pattern minimality: a kept rule with an equal or weaker pattern, a
// mapped lhs subset, and the same mapped rhs drops the other rule; rules from
// a strictly weaker pattern only reduce when they are exact.
std::vector<DiscoveredRule> reduce_rules(std::vector<DiscoveredRule> rules);

}  // namespace aged
