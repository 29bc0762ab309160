#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "causalstruct/error.hpp"
#include "causalstruct/graph.hpp"
#include "causalstruct/relation.hpp"
#include "test_support.hpp"

using namespace causalstruct;
using namespace cs_test;
using R = SpatialRelation;

TEST_CASE("relation vocabulary round-trips in canonical order") {
  CHECK(kAllRelations.size() == 15);
  for (std::size_t i = 0; i < kAllRelations.size(); ++i) {
    CHECK(vocabulary_index(kAllRelations[i]) == i);
    CHECK(parse_relation(to_string(kAllRelations[i])) == kAllRelations[i]);
  }
  CHECK(to_string(R::left_front) == "left_front");
  CHECK_FALSE(try_parse_relation("beside"));
  CHECK_FALSE(try_parse_relation("On"));
  try {
    parse_relation("beside");
    FAIL("expected UnknownRelation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownRelation);
  }
}

TEST_CASE("inverse relations") {
  CHECK(inverse_relation(R::left) == R::right);
  CHECK(inverse_relation(R::right) == R::left);
  CHECK(inverse_relation(R::front) == R::behind);
  CHECK(inverse_relation(R::on) == R::under);
  CHECK(inverse_relation(R::under) == R::on);
  CHECK(inverse_relation(R::above) == R::under);
  CHECK(inverse_relation(R::left_front) == R::right_back);
  CHECK(inverse_relation(R::right_front) == R::left_back);
  CHECK(inverse_relation(R::left_on) == R::right_on);
  CHECK_FALSE(inverse_relation(R::in));
  CHECK_FALSE(inverse_relation(R::corner));
}

TEST_CASE("validate rejects broken graphs") {
  auto g = graph_of({object("table", 120, 60, 75), object("cup", 8, 8, 10)},
                    {edge("cup", R::on, "table")});
  CHECK_NOTHROW(validate(g));

  auto expect_invalid = [](const CausalSceneGraph& bad) {
    try {
      validate(bad);
      FAIL("expected InvalidGraph");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidGraph);
    }
  };
  auto dangling = g;
  dangling.edges.push_back(edge("lamp", R::on, "table"));
  expect_invalid(dangling);

  auto self = g;
  self.edges.push_back(edge("cup", R::on, "cup"));
  expect_invalid(self);

  auto duplicate = g;
  duplicate.edges.push_back(edge("cup", R::left_on, "table"));
  expect_invalid(duplicate);

  auto bad_prior = g;
  bad_prior.edges[0].prior = 1.5;
  expect_invalid(bad_prior);

  auto bad_dims = g;
  bad_dims.nodes["cup"].dims.height_cm = 0;
  expect_invalid(bad_dims);

  // A removed duplicate is allowed.
  auto removed = g;
  removed.edges.push_back(edge("cup", R::left_on, "table", EdgeStatus::Removed));
  CHECK_NOTHROW(validate(removed));
}

TEST_CASE("topological order puts targets first with id tie-break") {
  auto g = graph_of({object("table", 120, 60, 75), object("cup", 8, 8, 10),
                     object("laptop", 35, 25, 2), object("mouse", 10, 6, 4)},
                    {edge("cup", R::on, "table"), edge("mouse", R::right, "laptop"),
                     edge("laptop", R::on, "table")});
  auto order = topological_order(g);
  CHECK(order == std::vector<std::string>{"table", "cup", "laptop", "mouse"});

  CHECK(topological_order(CausalSceneGraph{}).empty());

  auto isolated = graph_of({object("b", 1, 1, 1), object("a", 1, 1, 1)}, {});
  CHECK(topological_order(isolated) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("topological order is invariant under edge permutation") {
  auto g = graph_of({object("a", 1, 1, 1), object("b", 1, 1, 1), object("c", 1, 1, 1),
                     object("d", 1, 1, 1), object("e", 1, 1, 1)},
                    {edge("b", R::on, "a"), edge("c", R::on, "a"), edge("d", R::left, "b"),
                     edge("e", R::in, "c")});
  auto expected = topological_order(g);
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(g.edges.begin(), g.edges.end(), rng);
    CHECK(topological_order(g) == expected);
  }
}

TEST_CASE("cycles are reported") {
  auto g = graph_of({object("a", 1, 1, 1), object("b", 1, 1, 1), object("c", 1, 1, 1)},
                    {edge("a", R::on, "b"), edge("b", R::on, "c"), edge("c", R::on, "a")});
  try {
    topological_order(g);
    FAIL("expected CycleDetected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CycleDetected);
  }
  auto cycle = find_cycle(g);
  CHECK(cycle.size() == 3);

  g.edges[2].status = EdgeStatus::Removed;
  CHECK(find_cycle(g).empty());
  CHECK_NOTHROW(topological_order(g));
}

TEST_CASE("find_cycle returns the cycle edges only") {
  auto g = graph_of({object("a", 1, 1, 1), object("b", 1, 1, 1), object("c", 1, 1, 1),
                     object("d", 1, 1, 1)},
                    {edge("d", R::on, "a"), edge("a", R::on, "b"), edge("b", R::on, "c"),
                     edge("c", R::on, "b")});
  auto cycle = find_cycle(g);
  REQUIRE(cycle.size() == 2);
  std::sort(cycle.begin(), cycle.end());
  CHECK(cycle == std::vector<std::size_t>{2, 3});
}

TEST_CASE("isolated nodes and edge lookup") {
  auto g = graph_of({object("a", 1, 1, 1), object("b", 1, 1, 1), object("c", 1, 1, 1)},
                    {edge("a", R::on, "b"), edge("c", R::on, "b", EdgeStatus::Removed)});
  CHECK(isolated_nodes(g) == std::vector<std::string>{"c"});
  CHECK(g.find_edge("a", "b") == 0u);
  CHECK_FALSE(g.find_edge("b", "a"));
  CHECK_FALSE(g.find_edge("c", "b"));
  CHECK(g.active_edges() == std::vector<std::size_t>{0});
}

TEST_CASE("edge confidence prefers the posterior") {
  auto e = edge("a", R::on, "b", EdgeStatus::Ordered, 0.3);
  CHECK(e.confidence() == 0.3);
  e.posterior = 0.8;
  CHECK(e.confidence() == 0.8);
}

TEST_CASE("scaled extent") {
  auto cup = object("cup", 8, 8, 10, 2.0);
  auto ext = cup.extent_m();
  CHECK(ext.x == doctest::Approx(0.16));
  CHECK(ext.z == doctest::Approx(0.20));
}
