#include "qgk/graph.hpp"

#include <doctest.h>

#include <sstream>

#include "qgk/errors.hpp"
#include "qgk/serialize.hpp"
#include "test_util.hpp"

using namespace qgk;

TEST_CASE("smallest valid graph: the interval") {
  auto g = testing::interval_graph("1");
  CHECK(g->vertex_count() == 2);
  CHECK(g->edge_count() == 1);
  CHECK(g->degree(g->vertex_index("v0")) == 1);
  CHECK(g->degree(g->vertex_index("vL")) == 1);
}

TEST_CASE("three-leaf star degrees") {
  auto g = testing::star_graph(3, "1");
  CHECK(g->degree(g->vertex_index("c")) == 3);
  for (int i = 1; i <= 3; ++i)
    CHECK(g->degree(g->vertex_index("l" + std::to_string(i))) == 1);
}

TEST_CASE("build_graph rejections") {
  GraphSpec zero;
  zero.vertices = {"a", "b"};
  zero.edges = {{"e1", {"a", "b"}, "0"}};
  CHECK_THROWS_AS(build_graph(zero), GraphError);

  GraphSpec dup;
  dup.vertices = {"a", "a"};
  CHECK_THROWS_AS(build_graph(dup), GraphError);

  GraphSpec dangling;
  dangling.vertices = {"a", "b"};
  dangling.edges = {{"e1", {"a", "z"}, "1"}};
  CHECK_THROWS_AS(build_graph(dangling), GraphError);

  GraphSpec split;
  split.vertices = {"a", "b", "c", "d"};
  split.edges = {{"e1", {"a", "b"}, "1"}, {"e2", {"c", "d"}, "1"}};
  CHECK_THROWS_AS(build_graph(split), GraphError);
}

TEST_CASE("validate reports without throwing") {
  GraphSpec star;
  star.vertices = {"c", "l1", "l2", "l3"};
  star.edges = {{"e1", {"c", "l1"}, "1"},
                {"e2", {"c", "l2"}, "1"},
                {"e3", {"c", "l3"}, "1"}};
  CHECK(validate(star).empty());

  GraphSpec dangling;
  dangling.vertices = {"a", "b"};
  dangling.edges = {{"e1", {"a", "q"}, "1"}};
  const auto report = validate(dangling);
  CHECK(report.size() >= 1);

  GraphSpec split;
  split.vertices = {"a", "b", "c", "d"};
  split.edges = {{"e1", {"a", "b"}, "1"}, {"e2", {"c", "d"}, "1"}};
  bool disconnected = false;
  for (const auto& v : validate(split))
    if (v.find("disconnected") != std::string::npos) disconnected = true;
  CHECK(disconnected);
}

TEST_CASE("locate") {
  auto interval = testing::interval_graph("1");
  auto at = locate(*interval, {"e1", parse_decimal("0.3")});
  REQUIRE(at.size() == 2);
  CHECK(at[0].first == "v0");
  CHECK(at[0].second == frac(3, 10));
  CHECK(at[1].first == "vL");
  CHECK(at[1].second == frac(7, 10));

  auto star = testing::star_graph(3, "1");
  auto mid = locate(*star, {"e1", frac(1, 2)});
  CHECK(mid[0].first == "c");
  CHECK(mid[0].second == frac(1, 2));
  CHECK(mid[1].second == frac(1, 2));

  // loop: both ends attach to the same vertex, both distances reported
  GraphSpec loop_spec;
  loop_spec.vertices = {"v"};
  loop_spec.edges = {{"loop", {"v", "v"}, "2"}};
  auto loop = build_graph(loop_spec);
  auto pair = locate(loop, {"loop", frac(1, 2)});
  REQUIRE(pair.size() == 2);
  CHECK(pair[0].first == "v");
  CHECK(pair[1].first == "v");
  CHECK(pair[0].second == frac(1, 2));
  CHECK(pair[1].second == frac(3, 2));

  CHECK_THROWS_AS(locate(*interval, EdgePoint{"e1", Rational(1)}), GraphError);
  CHECK_THROWS_AS(locate(*interval, EdgePoint{"nope", frac(1, 2)}), GraphError);
}

TEST_CASE("degree sum counts loops twice") {
  GraphSpec spec;
  spec.vertices = {"v", "w"};
  spec.edges = {{"loop", {"v", "v"}, "2"},
                {"e1", {"v", "w"}, "1"},
                {"e2", {"v", "w"}, "1.5"}};  // parallel edge
  auto g = build_graph(spec);
  int degree_sum = 0;
  for (size_t v = 0; v < g.vertex_count(); ++v)
    degree_sum += g.degree(static_cast<int>(v));
  CHECK(degree_sum == 2 * static_cast<int>(g.edge_count()));
  CHECK(g.degree(g.vertex_index("v")) == 4);
}

TEST_CASE("locate distances sum to the edge length") {
  auto g = testing::path_graph("0.7", "1.3");
  for (const auto& e : g->edges()) {
    const EdgePoint p{e.id, Rational(e.length / 3)};
    auto at = locate(*g, p);
    CHECK(Rational(at[0].second + at[1].second) == e.length);
  }
}

TEST_CASE("decimal parsing is exact and base-10") {
  CHECK(parse_decimal("0.25") == frac(1, 4));  // not octal 021/100
  CHECK(parse_decimal("0.09") == frac(9, 100));
  CHECK(parse_decimal("-1.5") == frac(-3, 2));
  CHECK(parse_decimal("3.10") == frac(31, 10));
  CHECK(parse_rational("7/4") == frac(7, 4));
  CHECK_THROWS_AS(parse_decimal("1.2.3"), Error);
  CHECK_THROWS_AS(parse_decimal("abc"), Error);
  CHECK_THROWS_AS(parse_decimal("1e3"), Error);
}

TEST_CASE("graph JSON round-trip") {
  GraphSpec spec;
  spec.vertices = {"a", "b", "c"};
  spec.edges = {{"e1", {"a", "b"}, "1.5"},
                {"e2", {"b", "c"}, "0.25"},
                {"loop", {"c", "c"}, "3"}};
  const auto j = graph_to_json(spec);
  const auto back = graph_from_json(j);
  CHECK(graph_to_json(back) == j);
  auto g = build_graph(back);
  CHECK(g.edge(g.edge_index("e1")).length == frac(3, 2));
  CHECK(g.edge(g.edge_index("loop")).is_loop());
}
