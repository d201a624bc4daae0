#pragma once

#include <vector>

#include "aged/engine.hpp"
#include "aged/items.hpp"
#include "aged/matcher.hpp"

namespace aged {
// Deliberately naive reference implementations. They never share code with
// the production search path; the CLI --verify mode and the property suites
// lean on them.
namespace oracle {

// All minimal lhs sets with e3(lhs -> rhs) <= epsilon, found by enumerating
// subsets of the universe minus rhs in ascending size order.
std::vector<Bitset> brute_force_minimal_lhs(std::uint32_t rhs,
                                            const BinaryRelation& b,
                                            const ItemUniverse& universe,
                                            double epsilon,
                                            std::size_t max_size);

// Exhaustive enumeration of injective assignments. Requires at most 4 pattern
// variables and at most 40 graph nodes.
MniReport brute_force_mni(const GraphPattern& q, const PropertyGraph& g);

// max{|J| : J subset of H, J satisfies lhs -> rhs}, by trying all 2^|H|
// subsets. Requires |H| <= 12.
std::size_t brute_force_max_satisfying_subset(const Bitset& lhs,
                                              std::uint32_t rhs,
                                              const BinaryRelation& b);

// Row-by-row e3 evaluation used by --verify; same adom convention as
// compute_e3 but a separate evaluation path.
ErrorReport naive_e3(const Bitset& lhs, std::uint32_t rhs,
                     const BinaryRelation& b, const ItemUniverse& universe);

}  // namespace oracle
}  // namespace aged
