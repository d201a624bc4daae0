#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>

#include "aged/errors.hpp"
#include "aged/graph.hpp"
#include "helpers.hpp"

using namespace aged;

namespace {

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream f(path, std::ios::binary);
  f << body;
  return path;
}

}  // namespace

TEST_CASE("labels_match basics") {
  CHECK(labels_match("company", "company"));
  CHECK(labels_match("*", "product"));
  CHECK(labels_match("product", "*"));
  CHECK(labels_match("*", "*"));
  CHECK_FALSE(labels_match("company", "product"));
}

TEST_CASE("labels_match is reflexive and symmetric") {
  const char* labels[] = {"a", "b", "*", "is_a", "x1"};
  for (auto l : labels) {
    CHECK(labels_match(l, l));
    CHECK(labels_match(l, "*"));
    for (auto r : labels) CHECK(labels_match(l, r) == labels_match(r, l));
  }
}

TEST_CASE("load_graph on the demo fixture") {
  auto g = PropertyGraph::load(testutil::fixture("games.nodes.tsv"),
                               testutil::fixture("games.edges.tsv"));
  CHECK(g.node_count() == 15);
  CHECK(g.edge_count() == 10);
  auto idx = g.index_of(7);
  REQUIRE(idx.has_value());
  CHECK(g.node(*idx).label == "product");
  CHECK(g.node(*idx).attrs.at("name") == "Soccer");
  CHECK(g.node(*idx).attrs.at("year") == "2010");
}

TEST_CASE("empty files give an empty graph") {
  auto nodes = write_temp("aged_empty_nodes.tsv", "");
  auto edges = write_temp("aged_empty_edges.tsv", "");
  auto g = PropertyGraph::load(nodes, edges);
  CHECK(g.node_count() == 0);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("loader error cases carry line numbers") {
  auto edges = write_temp("aged_err_edges.tsv", "");

  SUBCASE("duplicate attribute name") {
    auto nodes = write_temp("aged_err_nodes1.tsv",
                            "0\tmovie\tyear=2001;year=2002\n");
    try {
      PropertyGraph::load(nodes, edges);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.line_number == 1);
      CHECK(std::string(e.what()).find("repeated") != std::string::npos);
    }
  }
  SUBCASE("duplicate node id") {
    auto nodes = write_temp("aged_err_nodes2.tsv",
                            "0\tmovie\t\n# comment\n0\tactor\t\n");
    CHECK_THROWS_AS(PropertyGraph::load(nodes, edges), FormatError);
  }
  SUBCASE("bad node id") {
    auto nodes = write_temp("aged_err_nodes3.tsv", "-3\tmovie\t\n");
    CHECK_THROWS_AS(PropertyGraph::load(nodes, edges), FormatError);
  }
  SUBCASE("node label may not be the wildcard") {
    auto nodes = write_temp("aged_err_nodes4.tsv", "0\t*\t\n");
    CHECK_THROWS_AS(PropertyGraph::load(nodes, edges), FormatError);
  }
  SUBCASE("attribute name id is reserved") {
    auto nodes = write_temp("aged_err_nodes5.tsv", "0\tmovie\tid=7\n");
    CHECK_THROWS_AS(PropertyGraph::load(nodes, edges), FormatError);
  }
  SUBCASE("edge referencing unknown node") {
    auto nodes = write_temp("aged_err_nodes6.tsv", "0\tmovie\t\n");
    auto bad_edges = write_temp("aged_err_edges6.tsv", "0\tlikes\t9\n");
    try {
      PropertyGraph::load(nodes, bad_edges);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.line_number == 1);
      CHECK(std::string(e.what()).find("unknown node") != std::string::npos);
    }
  }
}

TEST_CASE("parallel edges collapse, distinct labels stay") {
  auto nodes = write_temp("aged_par_nodes.tsv", "0\ta\t\n1\tb\t\n");
  auto edges = write_temp("aged_par_edges.tsv",
                          "0\tr\t1\n0\tr\t1\n0\ts\t1\n0\tr\t0\n");
  auto g = PropertyGraph::load(nodes, edges);
  CHECK(g.edge_count() == 3);  // r, s, and the self-loop
}

TEST_CASE("graph round-trips through save and load") {
  auto g = PropertyGraph::load(testutil::fixture("games.nodes.tsv"),
                               testutil::fixture("games.edges.tsv"));
  auto nodes = std::filesystem::temp_directory_path() / "aged_rt_nodes.tsv";
  auto edges = std::filesystem::temp_directory_path() / "aged_rt_edges.tsv";
  g.save(nodes, edges);
  auto g2 = PropertyGraph::load(nodes, edges);
  CHECK(g == g2);
}

TEST_CASE("load_pattern parses the fixture patterns") {
  auto q1 = load_pattern(testutil::fixture("isa.pattern"));
  CHECK(q1.vars.size() == 2);
  CHECK(q1.vars[0].label == "*");
  CHECK(q1.edges.size() == 1);
  CHECK(q1.edges[0].label == "is_a");

  auto q3 = load_pattern(testutil::fixture("creates_two.pattern"));
  CHECK(q3.vars.size() == 3);
  CHECK(q3.vars[1].name == "y");
  CHECK(q3.vars[2].name == "y'");
  CHECK(q3.edges.size() == 2);
  CHECK(q3.serialize() ==
        "x:company,y:product,y':product|x create y;x create y'");
}

TEST_CASE("degenerate single-variable pattern loads") {
  auto path = write_temp("aged_single.pattern", "vars: v:product\n");
  auto p = load_pattern(path);
  CHECK(p.vars.size() == 1);
  CHECK(p.edges.empty());
  CHECK(p.is_connected());
}

TEST_CASE("pattern error cases") {
  SUBCASE("dangling edge endpoint") {
    auto path = write_temp("aged_bad1.pattern", "vars: x:a, y:b\nx r z\n");
    CHECK_THROWS_AS(load_pattern(path), FormatError);
  }
  SUBCASE("disconnected pattern") {
    auto path = write_temp("aged_bad2.pattern", "vars: x:a, y:b, z:c\nx r y\n");
    CHECK_THROWS_AS(load_pattern(path), FormatError);
  }
  SUBCASE("malformed edge line") {
    auto path = write_temp("aged_bad3.pattern", "vars: x:a, y:b\nx r\n");
    CHECK_THROWS_AS(load_pattern(path), FormatError);
  }
  SUBCASE("duplicate variable") {
    auto path = write_temp("aged_bad4.pattern", "vars: x:a, x:b\n");
    CHECK_THROWS_AS(load_pattern(path), FormatError);
  }
}

TEST_CASE("a pattern file may hold several blocks") {
  auto path = write_temp("aged_multi.pattern",
                         "vars: x:a, y:b\nx r y\n\nvars: u:c\n");
  auto ps = load_patterns(path);
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].vars.size() == 2);
  CHECK(ps[1].vars.size() == 1);
  CHECK(ps[0].name != ps[1].name);
}
