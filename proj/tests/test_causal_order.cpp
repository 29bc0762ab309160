#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "causalstruct/causal_order.hpp"
#include "causalstruct/error.hpp"
#include "test_support.hpp"

using namespace causalstruct;
using namespace cs_test;
using R = SpatialRelation;

namespace {

DeterministicOracle desk_oracle() {
  auto truth = desk_objects();
  truth.edges = {edge("cup", R::on, "table"), edge("laptop", R::on, "table"),
                 edge("mouse", R::right, "laptop")};
  return DeterministicOracle(ground_truth_from_graph(truth));
}

}  // namespace

TEST_CASE("wrongly oriented edges are reversed with the inverse relation") {
  auto g = desk_objects();
  auto oracle = desk_oracle();
  auto out = order_edge(edge("laptop", R::left, "mouse", EdgeStatus::Proposed), g, oracle);
  CHECK(out.subject == "mouse");
  CHECK(out.relation == R::right);
  CHECK(out.target == "laptop");
  CHECK(out.status == EdgeStatus::Ordered);

  auto kept = order_edge(edge("cup", R::under, "table", EdgeStatus::Proposed), g, oracle);
  CHECK(kept.subject == "cup");
  CHECK(kept.relation == R::under);
}

TEST_CASE("ordering is idempotent and equal confidences keep the orientation") {
  auto g = desk_objects();
  auto oracle = desk_oracle();
  auto once = order_edge(edge("table", R::under, "cup", EdgeStatus::Proposed), g, oracle);
  CHECK(once.subject == "cup");
  CHECK(once.relation == R::on);
  CHECK(order_edge(once, g, oracle) == once);

  auto unknown = order_edge(edge("cup", R::left, "mouse", EdgeStatus::Proposed), g, oracle);
  CHECK(unknown.subject == "cup");
  CHECK(unknown.target == "mouse");
}

TEST_CASE("removed edges are left alone") {
  auto g = desk_objects();
  auto oracle = desk_oracle();
  auto removed = edge("table", R::under, "cup", EdgeStatus::Removed);
  CHECK(order_edge(removed, g, oracle) == removed);
}

TEST_CASE("size rule makes the larger object the target") {
  auto g = desk_objects();
  auto flipped = apply_size_rule(edge("table", R::under, "cup", EdgeStatus::Proposed), g);
  CHECK(flipped.subject == "cup");
  CHECK(flipped.relation == R::on);
  auto same = apply_size_rule(edge("mouse", R::right_on, "laptop", EdgeStatus::Proposed), g);
  CHECK(same.subject == "mouse");
  // No inverse word: untouched.
  auto in = apply_size_rule(edge("table", R::in, "cup", EdgeStatus::Proposed), g);
  CHECK(in.subject == "table");
}

TEST_CASE("causal order overrides the size rule") {
  // A large rug laid under a small lamp still depends on nothing: the lamp is on the rug.
  auto g = graph_of({object("rug", 200, 150, 1), object("lamp", 30, 30, 150)}, {});
  auto truth = g;
  truth.edges = {edge("lamp", R::on, "rug")};
  DeterministicOracle oracle(ground_truth_from_graph(truth));
  g.edges = {edge("lamp", R::on, "rug", EdgeStatus::Proposed)};
  auto ordered = order_graph(g, oracle);
  CHECK(ordered.edges[0].subject == "lamp");
  CHECK(ordered.edges[0].target == "rug");
}

TEST_CASE("completion connects isolated objects") {
  auto g = desk_objects();
  g.edges = {edge("cup", R::on, "table", EdgeStatus::Ordered)};
  auto oracle = desk_oracle();
  auto out = complete_edges(g, oracle);
  CHECK(isolated_nodes(out).empty());
  REQUIRE(out.edges.size() == 3);
  for (std::size_t i = 1; i < out.edges.size(); ++i) CHECK(out.edges[i].status == EdgeStatus::Proposed);

  auto single = graph_of({object("vase", 10, 10, 30)}, {});
  CHECK(complete_edges(single, oracle) == single);

  auto stranger = graph_of({object("vase", 10, 10, 30), object("table", 120, 60, 75)}, {});
  try {
    complete_edges(stranger, oracle);
    FAIL("expected CompletionFailed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CompletionFailed);
  }
}

TEST_CASE("enforce_dag drops the weakest cycle edge") {
  auto g = graph_of({object("a", 1, 1, 1), object("b", 1, 1, 1), object("c", 1, 1, 1)},
                    {edge("a", R::on, "b", EdgeStatus::Ordered, 0.9),
                     edge("b", R::on, "c", EdgeStatus::Ordered, 0.8),
                     edge("c", R::on, "a", EdgeStatus::Ordered, 0.3)});
  auto out = enforce_dag(g);
  CHECK(out.edges[2].status == EdgeStatus::Removed);
  CHECK(out.edges[0].active());
  CHECK(find_cycle(out).empty());

  auto dup = graph_of({object("a", 1, 1, 1), object("b", 1, 1, 1)},
                      {edge("a", R::on, "b", EdgeStatus::Ordered, 0.4),
                       edge("a", R::left_on, "b", EdgeStatus::Ordered, 0.7)});
  auto deduped = enforce_dag(dup);
  CHECK(deduped.edges[0].status == EdgeStatus::Removed);
  CHECK(deduped.edges[1].active());
}

TEST_CASE("enforce_dag always yields a DAG on random graphs") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> node(0, 5);
  std::uniform_real_distribution<double> prior(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    CausalSceneGraph g;
    for (int i = 0; i < 6; ++i) g.nodes.emplace("n" + std::to_string(i), object("n" + std::to_string(i), 1, 1, 1));
    for (int k = 0; k < 12; ++k) {
      int a = node(rng), b = node(rng);
      if (a == b) continue;
      g.edges.push_back(edge("n" + std::to_string(a), R::on, "n" + std::to_string(b),
                             EdgeStatus::Ordered, prior(rng)));
    }
    auto out = enforce_dag(g);
    CHECK(find_cycle(out).empty());
    CHECK_NOTHROW(validate(out));
  }
}
