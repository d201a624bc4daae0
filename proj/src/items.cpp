#include "aged/items.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "aged/errors.hpp"

namespace aged {

namespace {

// Per (variable, attribute) column of the pseudo-relation: one value pointer
// per match, nullptr when the node lacks the attribute.
using ValueColumn = std::vector<const std::string*>;

ValueColumn value_column(const MatchSet& h, const PropertyGraph& g,
                         std::uint32_t var, const std::string& attr) {
  ValueColumn col(h.matches.size(), nullptr);
  for (std::size_t row = 0; row < h.matches.size(); ++row) {
    const auto& attrs = g.node(h.matches[row][var]).attrs;
    auto it = attrs.find(attr);
    if (it != attrs.end()) col[row] = &it->second;
  }
  return col;
}

bool item_less(const Item& a, const Item& b) {
  auto key = [](const Item& i) {
    return std::tie(i.kind, i.var1, i.var2, i.attr1, i.attr2, i.constant);
  };
  return key(a) < key(b);
}

}  // namespace

std::string item_display(const Item& item, const GraphPattern& pattern) {
  const auto& vn = [&](std::uint32_t v) -> const std::string& {
    return pattern.vars[v].name;
  };
  switch (item.kind) {
    case ItemKind::Constant:
      return vn(item.var1) + "." + item.attr1 + "=" + item.constant;
    case ItemKind::Variable:
      return vn(item.var1) + "." + item.attr1 + "=" + vn(item.var2) + "." +
             item.attr2;
    case ItemKind::Id:
      return vn(item.var1) + ".id=" + vn(item.var2) + ".id";
  }
  return {};
}

ItemUniverse make_universe(std::vector<Item> items) {
  std::sort(items.begin(), items.end(), item_less);
  ItemUniverse u;
  u.items = std::move(items);
  u.rhs_candidates.resize(u.items.size());
  for (std::uint32_t i = 0; i < u.items.size(); ++i) u.rhs_candidates[i] = i;
  return u;
}

ItemUniverse build_items(const GraphPattern& q, const MatchSet& h,
                         const PropertyGraph& g, const BuildItemOptions& opts) {
  if (h.matches.empty()) throw Error("build_items: empty match set");

  std::set<std::string> allowed_attrs;
  bool restrict_attrs = opts.attr_limit > 0;
  if (restrict_attrs) {
    auto freq = g.attribute_frequencies();
    for (std::size_t i = 0; i < freq.size() && i < opts.attr_limit; ++i)
      allowed_attrs.insert(freq[i].first);
  }
  auto attr_allowed = [&](const std::string& a) {
    return !restrict_attrs || allowed_attrs.count(a) > 0;
  };

  std::uint32_t nvars = static_cast<std::uint32_t>(q.vars.size());

  // Observed attributes and value counts per variable, over the match rows.
  std::vector<std::map<std::string, std::map<std::string, std::size_t>>>
      var_values(nvars);
  for (const auto& row : h.matches) {
    for (std::uint32_t v = 0; v < nvars; ++v) {
      for (const auto& [attr, value] : g.node(row[v]).attrs) {
        if (!attr_allowed(attr)) continue;
        ++var_values[v][attr][value];
      }
    }
  }

  std::vector<Item> items;
  for (std::uint32_t v = 0; v < nvars; ++v) {
    for (const auto& [attr, values] : var_values[v]) {
      for (const auto& [value, count] : values) {
        if (count < opts.min_const_support) continue;
        Item it;
        it.kind = ItemKind::Constant;
        it.var1 = v;
        it.attr1 = attr;
        it.constant = value;
        items.push_back(std::move(it));
      }
    }
  }

  for (std::uint32_t v1 = 0; v1 < nvars; ++v1) {
    for (std::uint32_t v2 = v1 + 1; v2 < nvars; ++v2) {
      bool same_kind = q.vars[v1].label == q.vars[v2].label;
      if (!same_kind && !opts.cross_kind) continue;

      if (same_kind) {
        Item id;
        id.kind = ItemKind::Id;
        id.var1 = v1;
        id.var2 = v2;
        items.push_back(std::move(id));
      }

      for (const auto& [a1, vals1] : var_values[v1]) {
        ValueColumn c1 = value_column(h, g, v1, a1);
        for (const auto& [a2, vals2] : var_values[v2]) {
          ValueColumn c2 = value_column(h, g, v2, a2);
          bool satisfied = false;
          for (std::size_t row = 0; row < h.matches.size(); ++row) {
            if (c1[row] && c2[row] && *c1[row] == *c2[row]) {
              satisfied = true;
              break;
            }
          }
          if (!satisfied) continue;
          Item it;
          it.kind = ItemKind::Variable;
          it.var1 = v1;
          it.var2 = v2;
          it.attr1 = a1;
          it.attr2 = a2;
          items.push_back(std::move(it));
        }
      }
    }
  }

  for (Item& it : items) it.display = item_display(it, q);
  return make_universe(std::move(items));
}

BinaryRelation build_binary_relation(const ItemUniverse& universe,
                                     const MatchSet& h,
                                     const PropertyGraph& g) {
  BinaryRelation b;
  b.match_count = h.matches.size();
  std::size_t nitems = universe.items.size();
  b.rows.assign(b.match_count, Bitset(nitems));
  b.cols.assign(nitems, Bitset(b.match_count));

  // Resolve the needed pseudo-relation columns once.
  std::map<std::pair<std::uint32_t, std::string>, ValueColumn> columns;
  auto column = [&](std::uint32_t var, const std::string& attr) -> ValueColumn& {
    auto key = std::make_pair(var, attr);
    auto it = columns.find(key);
    if (it == columns.end())
      it = columns.emplace(key, value_column(h, g, var, attr)).first;
    return it->second;
  };

  for (std::size_t i = 0; i < nitems; ++i) {
    const Item& item = universe.items[i];
    switch (item.kind) {
      case ItemKind::Constant: {
        const ValueColumn& c = column(item.var1, item.attr1);
        for (std::size_t row = 0; row < b.match_count; ++row) {
          if (c[row] && *c[row] == item.constant) {
            b.rows[row].set(i);
            b.cols[i].set(row);
          }
        }
        break;
      }
      case ItemKind::Variable: {
        const ValueColumn& c1 = column(item.var1, item.attr1);
        const ValueColumn& c2 = column(item.var2, item.attr2);
        for (std::size_t row = 0; row < b.match_count; ++row) {
          if (c1[row] && c2[row] && *c1[row] == *c2[row]) {
            b.rows[row].set(i);
            b.cols[i].set(row);
          }
        }
        break;
      }
      case ItemKind::Id: {
        for (std::size_t row = 0; row < b.match_count; ++row) {
          if (h.matches[row][item.var1] == h.matches[row][item.var2]) {
            b.rows[row].set(i);
            b.cols[i].set(row);
          }
        }
        break;
      }
    }
  }
  return b;
}

}  // namespace aged
