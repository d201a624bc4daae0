#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aged/bitset.hpp"
#include "aged/graph.hpp"
#include "aged/matcher.hpp"

namespace aged {

enum class ItemKind { Constant, Variable, Id };

// Mining-side encoding of one literal over a pattern's variables:
//   Constant: var1.attr1 = constant
//   Variable: var1.attr1 = var2.attr2   (var1 < var2 in declaration order)
//   Id:       var1.id = var2.id
struct Item {
  ItemKind kind = ItemKind::Constant;
  std::uint32_t var1 = 0;
  std::uint32_t var2 = 0;     // Variable/Id only
  std::string attr1;          // absent for Id
  std::string attr2;          // Variable only
  std::string constant;       // Constant only
  std::string display;

  friend bool operator==(const Item&, const Item&) = default;
};

std::string item_display(const Item& item, const GraphPattern& pattern);

struct ItemUniverse {
  std::vector<Item> items;                    // canonically ordered
  std::vector<std::uint32_t> rhs_candidates;  // indices into items
};

struct BuildItemOptions {
  std::size_t min_const_support = 2;
  bool cross_kind = false;
  // 0 = all attributes; otherwise only the k globally most frequent ones.
  std::size_t attr_limit = 0;
};

// Items over the pattern's variables, derived from the match set:
//  - constant items for values occurring in >= min_const_support matches,
//  - variable items for attribute pairs over same-labeled variable pairs
//    (all pairs when cross_kind), kept only if satisfied by some match,
//  - id items for every same-labeled variable pair, kept unconditionally so
//    key-style rules remain expressible.
ItemUniverse build_items(const GraphPattern& q, const MatchSet& h,
                         const PropertyGraph& g,
                         const BuildItemOptions& opts = {});

// 0/1 satisfaction matrix. rows[h] is a bit per item in universe order;
// cols[i] is the transposed per-item bit vector over matches.
struct BinaryRelation {
  std::size_t match_count = 0;
  std::vector<Bitset> rows;
  std::vector<Bitset> cols;
};

BinaryRelation build_binary_relation(const ItemUniverse& universe,
                                     const MatchSet& h,
                                     const PropertyGraph& g);

ItemUniverse make_universe(std::vector<Item> items);

}  // namespace aged
