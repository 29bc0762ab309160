#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "causalstruct/error.hpp"
#include "causalstruct/layout.hpp"
#include "causalstruct/oracle.hpp"
#include "test_support.hpp"

using namespace causalstruct;
using namespace cs_test;
using R = SpatialRelation;

namespace {

CausalSceneGraph desk_truth() {
  auto g = desk_objects();
  g.edges = {edge("cup", R::on, "table"), edge("laptop", R::on, "table"),
             edge("mouse", R::right, "laptop")};
  return g;
}

EdgeQuery query(const CausalSceneGraph& g, const CausalEdge& e) { return EdgeQuery::from(g, e); }

}  // namespace

TEST_CASE("clamp_score rounds and saturates") {
  CHECK(clamp_score(0.4) == 0);
  CHECK(clamp_score(24.6) == 25);
  CHECK(clamp_score(-130.0) == -100);
  CHECK(clamp_score(1e9) == 100);
  CHECK(clamp_score(std::nan("")) == 0);
}

TEST_CASE("ground truth follows the reference graph") {
  auto truth = ground_truth_from_graph(desk_truth());
  CHECK(truth.relation("cup", "table") == R::on);
  CHECK_FALSE(truth.relation("table", "cup"));
  CHECK(truth.depends_on("mouse", "table"));
  CHECK_FALSE(truth.depends_on("table", "mouse"));
  CHECK(truth.true_scales.at("cup") == 1.0);
  // Cup rests on the 75 cm table.
  CHECK(truth.true_positions.at("cup").z == doctest::Approx(0.80));
  CHECK(truth.reference_extent.at("table").x == doctest::Approx(1.2));
}

TEST_CASE("precedence comes from transitive dependence") {
  auto g = desk_truth();
  DeterministicOracle oracle(ground_truth_from_graph(g));
  auto p = oracle.query_precedence(g.node("mouse"), g.node("table"));
  CHECK(p.c_ij == 0.9);
  CHECK(p.c_ji == 0.1);
  auto q = oracle.query_precedence(g.node("table"), g.node("cup"));
  CHECK(q.c_ij == 0.1);
  CHECK(q.c_ji == 0.9);
  auto u = oracle.query_precedence(g.node("cup"), g.node("laptop"));
  CHECK(u.c_ij == 0.5);
  CHECK(u.c_ji == 0.5);
  CHECK_THROWS_AS(oracle.query_precedence(g.node("cup"), g.node("cup")), Error);
}

TEST_CASE("priors and trial fractions") {
  auto g = desk_truth();
  DeterministicOracle oracle(ground_truth_from_graph(g));
  CHECK(oracle.query_edge_prior(query(g, edge("cup", R::on, "table"))) == 0.9);
  CHECK(oracle.query_edge_prior(query(g, edge("cup", R::under, "table"))) == 0.5);
  CHECK(oracle.query_edge_prior(query(g, edge("table", R::under, "cup"))) == 0.5);
  CHECK(oracle.query_edge_prior(query(g, edge("cup", R::left, "mouse"))) == 0.2);

  CHECK(oracle.query_edge_trials(query(g, edge("cup", R::on, "table")), 5) == 1.0);
  CHECK(oracle.query_edge_trials(query(g, edge("cup", R::in, "table")), 5) == 0.0);
  CHECK_THROWS_AS(oracle.query_edge_trials(query(g, edge("cup", R::on, "table")), 0), Error);
}

TEST_CASE("intervention judgments") {
  auto g = desk_truth();
  DeterministicOracle oracle(ground_truth_from_graph(g));
  RenderedView view;
  CHECK(oracle.query_intervention_judgment(query(g, edge("cup", R::on, "table")), view, 1) ==
        InterventionJudgment::keep());
  CHECK(oracle.query_intervention_judgment(query(g, edge("cup", R::above, "table")), view, 1) ==
        InterventionJudgment::modify(R::on));
  // Reversed pair: the inverse of the true relation.
  CHECK(oracle.query_intervention_judgment(query(g, edge("laptop", R::front, "mouse")), view, 1) ==
        InterventionJudgment::modify(R::left));
  // No opinion on unrelated pairs.
  CHECK(oracle.query_intervention_judgment(query(g, edge("cup", R::left, "mouse")), view, 1) ==
        InterventionJudgment::keep());
}

TEST_CASE("scale and position scores are relative errors") {
  auto g = desk_truth();
  auto truth = ground_truth_from_graph(g);
  DeterministicOracle oracle(truth);
  auto scene = resolve_overlaps(place_graph(g), g).scene;
  auto e = edge("cup", R::on, "table");
  RenderedView view;
  CHECK(oracle.query_scale_score(query(g, e), view, scene) == 0);
  CHECK(oracle.query_position_scores(query(g, e), view, scene) == AxisScores{0, 0, 0});

  scene.at("cup").scale = 1.3;
  CHECK(oracle.query_scale_score(query(g, e), view, scene) == 30);
  scene.at("cup").scale = 0.2;
  CHECK(oracle.query_scale_score(query(g, e), view, scene) == -80);

  scene.at("cup").center.x += 0.3;  // 0.3 m against a 1.2 m table
  scene.at("cup").center.y -= 0.06;
  auto s = oracle.query_position_scores(query(g, e), view, scene);
  CHECK(s.x == 25);
  CHECK(s.y == -10);
  CHECK(s.z == 0);
}

TEST_CASE("support proposals come from the truth table") {
  auto g = desk_truth();
  DeterministicOracle oracle(ground_truth_from_graph(g));
  auto partial = desk_objects();
  auto proposal = oracle.propose_support_edge(partial.node("cup"), partial);
  REQUIRE(proposal);
  CHECK(proposal->subject == "cup");
  CHECK(proposal->relation == R::on);
  CHECK(proposal->target == "table");

  auto lonely = graph_of({object("vase", 10, 10, 30), object("table", 120, 60, 75)}, {});
  CHECK_FALSE(oracle.propose_support_edge(lonely.node("vase"), lonely));
}
