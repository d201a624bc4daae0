#pragma once

#include <string>
#include <vector>

#include "aged/graph.hpp"
#include "aged/matcher.hpp"

namespace aged {

struct RankedPattern {
  GraphPattern pattern;
  MniReport mni;
};

struct PatternSet {
  std::vector<RankedPattern> patterns;
};

// Canonical string code: minimum serialization over all variable
// permutations. Two patterns are isomorphic (label-exact) iff codes match.
std::string canonical_code(const GraphPattern& p);

// The pattern rewritten in its canonical variable order, renamed x0..xn.
GraphPattern canonical_form(const GraphPattern& p);

// True iff q is a strictly weaker topological constraint than q2: there is an
// injective variable mapping under which q's edges are a subset of q2's and
// every q label equals the mapped q2 label or is the wildcard, and the
// patterns are not isomorphic.
bool pattern_reduces(const GraphPattern& q, const GraphPattern& q2);

// All injective mappings witnessing q's embedding into q2 (labels equal or
// upgraded to the wildcard on q's side). Used both by pattern_reduces and by
// rule reduction.
std::vector<std::vector<std::uint32_t>> reduction_mappings(
    const GraphPattern& q, const GraphPattern& q2);

// Level-wise growth of connected concrete-labeled patterns with 1..max_edges
// edges, MNI >= tau, with anti-monotone pruning. No wildcard or self-loop
// edges are generated.
PatternSet mine_frequent_patterns(const PropertyGraph& g, std::size_t tau,
                                  std::size_t max_edges,
                                  std::size_t match_cap = kDefaultMatchCap);

// Keeps the reduction-minimal patterns; isomorphic duplicates collapse to the
// canonically smallest serialization.
PatternSet reduce_patterns(PatternSet ps);

}  // namespace aged
