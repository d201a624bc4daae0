#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "aged/engine.hpp"
#include "aged/graph.hpp"
#include "aged/items.hpp"
#include "aged/matcher.hpp"

namespace testutil {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(AGED_FIXTURES) / name;
}

struct DemoFixture {
  aged::PropertyGraph games;      // node 11 labeled company
  aged::PropertyGraph games_alt;  // node 11 labeled studio
  aged::GraphPattern isa;          // x:* -is_a-> y:*
  aged::GraphPattern creates;      // x:company -create-> y:product
  aged::GraphPattern creates_any;  // x:* -create-> y:product
  aged::GraphPattern creates_two;  // company with two created products
};

inline DemoFixture load_demo() {
  DemoFixture f{
      aged::PropertyGraph::load(fixture("games.nodes.tsv"),
                                fixture("games.edges.tsv")),
      aged::PropertyGraph::load(fixture("games_alt.nodes.tsv"),
                                fixture("games_alt.edges.tsv")),
      aged::load_pattern(fixture("isa.pattern")),
      aged::load_pattern(fixture("creates.pattern")),
      aged::load_pattern(fixture("creates_any.pattern")),
      aged::load_pattern(fixture("creates_two.pattern"))};
  return f;
}

// The五 worked-example items over creates_two (x, y, y'): a1 = x.name=EA,
// a2 = y.name=y'.name, a3 = y.name=Soccer, a4 = y.year=y'.released, id.
struct SelectUniverse {
  aged::ItemUniverse universe;
  std::uint32_t a1, a2, a3, a4, id;
};

inline SelectUniverse select_five(const aged::GraphPattern& q) {
  using aged::Item;
  using aged::ItemKind;
  std::vector<Item> items;
  Item a1;
  a1.kind = ItemKind::Constant;
  a1.var1 = *q.var_index("x");
  a1.attr1 = "name";
  a1.constant = "EA";
  Item a3 = a1;
  a3.var1 = *q.var_index("y");
  a3.constant = "Soccer";
  Item a2;
  a2.kind = ItemKind::Variable;
  a2.var1 = *q.var_index("y");
  a2.var2 = *q.var_index("y'");
  a2.attr1 = "name";
  a2.attr2 = "name";
  Item a4 = a2;
  a4.attr1 = "year";
  a4.attr2 = "released";
  Item id;
  id.kind = ItemKind::Id;
  id.var1 = *q.var_index("y");
  id.var2 = *q.var_index("y'");
  for (Item* it : {&a1, &a2, &a3, &a4, &id})
    it->display = aged::item_display(*it, q);
  items = {a1, a2, a3, a4, id};
  SelectUniverse out{aged::make_universe(std::move(items)), 0, 0, 0, 0, 0};
  auto find = [&](const Item& needle) {
    for (std::uint32_t i = 0; i < out.universe.items.size(); ++i)
      if (out.universe.items[i] == needle) return i;
    return std::uint32_t{UINT32_MAX};
  };
  out.a1 = find(a1);
  out.a2 = find(a2);
  out.a3 = find(a3);
  out.a4 = find(a4);
  out.id = find(id);
  return out;
}

// Random binary relation over n items with kinds chosen so that no lhs/rhs
// combination is equality-trivial: every item gets a distinct attribute and
// at most one id item appears.
struct RandomInstance {
  aged::GraphPattern pattern;
  aged::ItemUniverse universe;
  aged::BinaryRelation relation;
};

inline RandomInstance random_instance(std::mt19937_64& rng,
                                      std::size_t max_rows,
                                      std::size_t max_items) {
  using aged::Item;
  using aged::ItemKind;
  std::uniform_int_distribution<std::size_t> rows_d(1, max_rows);
  std::uniform_int_distribution<std::size_t> items_d(1, max_items);
  std::size_t rows = rows_d(rng);
  std::size_t nitems = items_d(rng);

  RandomInstance inst;
  inst.pattern.name = "R";
  inst.pattern.vars = {{"x", "t"}, {"y", "t"}};
  inst.pattern.edges = {{0, 1, "r"}};

  bool used_id = false;
  std::vector<Item> items;
  for (std::size_t i = 0; i < nitems; ++i) {
    Item it;
    std::uniform_int_distribution<int> kind_d(0, 2);
    int k = kind_d(rng);
    if (k == 2 && !used_id) {
      used_id = true;
      it.kind = ItemKind::Id;
      it.var1 = 0;
      it.var2 = 1;
    } else if (k == 1) {
      it.kind = ItemKind::Variable;
      it.var1 = 0;
      it.var2 = 1;
      it.attr1 = "a" + std::to_string(i);
      it.attr2 = "b" + std::to_string(i);
    } else {
      it.kind = ItemKind::Constant;
      it.var1 = 0;
      it.attr1 = "a" + std::to_string(i);
      it.constant = "c";
    }
    it.display = aged::item_display(it, inst.pattern);
    items.push_back(std::move(it));
  }
  inst.universe = aged::make_universe(std::move(items));

  inst.relation.match_count = rows;
  inst.relation.rows.assign(rows, aged::Bitset(nitems));
  inst.relation.cols.assign(nitems, aged::Bitset(rows));
  std::uniform_int_distribution<int> bit_d(0, 3);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < nitems; ++c) {
      if (bit_d(rng) != 0) {  // biased toward 1 so covers stay interesting
        inst.relation.rows[r].set(c);
        inst.relation.cols[c].set(r);
      }
    }
  }
  return inst;
}

// Small random property graph: node labels A..C, edge labels r/s, no
// self-loops, no duplicate edges. Attributes optional.
inline aged::PropertyGraph random_graph(std::mt19937_64& rng,
                                        std::size_t max_nodes,
                                        bool with_attrs = false) {
  std::uniform_int_distribution<std::size_t> n_d(2, max_nodes);
  std::size_t n = n_d(rng);
  std::vector<aged::NodeRecord> nodes;
  const char* labels[] = {"A", "B", "C"};
  std::uniform_int_distribution<int> label_d(0, 2);
  std::uniform_int_distribution<int> val_d(0, 2);
  for (std::size_t i = 0; i < n; ++i) {
    aged::NodeRecord rec;
    rec.id = i;
    rec.label = labels[label_d(rng)];
    if (with_attrs) {
      rec.attrs["p"] = "v" + std::to_string(val_d(rng));
      if (val_d(rng) != 0) rec.attrs["q"] = "w" + std::to_string(val_d(rng));
    }
    nodes.push_back(std::move(rec));
  }
  std::vector<std::tuple<aged::NodeId, std::string, aged::NodeId>> edges;
  std::uniform_int_distribution<std::size_t> node_d(0, n - 1);
  std::uniform_int_distribution<int> elabel_d(0, 1);
  std::size_t target_edges = 2 * n;
  for (std::size_t i = 0; i < target_edges; ++i) {
    std::size_t a = node_d(rng), b = node_d(rng);
    if (a == b) continue;
    edges.emplace_back(a, elabel_d(rng) ? "r" : "s", b);
  }
  return aged::PropertyGraph::from_records(std::move(nodes), edges);
}

// Random connected pattern with nvars in [2,4] over the labels/edge labels
// used by random_graph. Occasionally uses wildcards when allowed.
inline aged::GraphPattern random_pattern(std::mt19937_64& rng,
                                         std::size_t max_vars,
                                         bool allow_wildcard) {
  std::uniform_int_distribution<std::size_t> nv_d(2, max_vars);
  std::size_t nv = nv_d(rng);
  const char* labels[] = {"A", "B", "C"};
  std::uniform_int_distribution<int> label_d(0, 2);
  std::uniform_int_distribution<int> wild_d(0, 4);
  aged::GraphPattern p;
  p.name = "rp";
  for (std::size_t i = 0; i < nv; ++i) {
    std::string l = labels[label_d(rng)];
    if (allow_wildcard && wild_d(rng) == 0) l = "*";
    p.vars.push_back({"v" + std::to_string(i), l});
  }
  // Spanning edges keep it connected; a few extra edges add structure.
  std::uniform_int_distribution<int> elabel_d(0, 1);
  std::uniform_int_distribution<int> dir_d(0, 1);
  for (std::size_t i = 1; i < nv; ++i) {
    std::uniform_int_distribution<std::size_t> prev_d(0, i - 1);
    std::uint32_t other = static_cast<std::uint32_t>(prev_d(rng));
    std::uint32_t self = static_cast<std::uint32_t>(i);
    std::string el = elabel_d(rng) ? "r" : "s";
    if (dir_d(rng))
      p.edges.push_back({self, other, el});
    else
      p.edges.push_back({other, self, el});
  }
  if (nv >= 3 && wild_d(rng) == 0) {
    std::uint32_t a = 0, b = static_cast<std::uint32_t>(nv - 1);
    p.edges.push_back({a, b, elabel_d(rng) ? "r" : "s"});
  }
  p.normalize();
  return p;
}

}  // namespace testutil
