#pragma once

#include <cstddef>
#include <vector>

#include "aged/graph.hpp"

namespace aged {

inline constexpr std::size_t kDefaultMatchCap = 10'000'000;

struct MatchOptions {
  bool symmetry_breaking = true;
  std::size_t match_cap = kDefaultMatchCap;
};

// Matches are node-index tuples aligned with the pattern's variable
// declaration order, listed in ascending lexicographic order.
struct MatchSet {
  GraphPattern pattern;
  std::vector<std::vector<NodeIndex>> matches;
};

struct MniReport {
  // Per pattern variable: the distinct external node ids it maps to across
  // all injective matches, sorted ascending.
  std::vector<std::vector<NodeId>> domains;
  std::size_t mni = 0;
};

// All homomorphic matches of Q in G. With symmetry breaking on, a match is
// kept only if its node-id tuple is strictly lexicographically smaller than
// its image under every non-identity automorphism of the pattern; this keeps
// one representative per orbit of interchangeable variables and drops
// assignments fixed by a symmetry (e.g. two interchangeable variables mapped
// to the same node).
MatchSet find_homomorphisms(const GraphPattern& q, const PropertyGraph& g,
                            const MatchOptions& opts = {});

// Minimum image based support: domains collect distinct images over all
// injective matches (no symmetry breaking); mni is the smallest domain size.
MniReport compute_mni(const GraphPattern& q, const PropertyGraph& g,
                      std::size_t match_cap = kDefaultMatchCap);

bool is_persistent(const GraphPattern& q, const PropertyGraph& g,
                   std::size_t tau, std::size_t match_cap = kDefaultMatchCap);

// Independent re-check of the three homomorphism conditions for one match.
bool match_satisfies(const GraphPattern& q, const PropertyGraph& g,
                     const std::vector<NodeIndex>& assignment);

// Non-identity label-preserving automorphisms of the pattern (wildcards are
// treated as ordinary labels here). Each entry is a permutation of variable
// indices.
std::vector<std::vector<std::uint32_t>> pattern_automorphisms(
    const GraphPattern& q);

std::vector<std::vector<NodeId>> external_matches(const MatchSet& ms,
                                                  const PropertyGraph& g);

}  // namespace aged
