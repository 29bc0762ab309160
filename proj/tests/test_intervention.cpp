#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "causalstruct/error.hpp"
#include "causalstruct/intervention.hpp"
#include "test_support.hpp"

using namespace causalstruct;
using namespace cs_test;
using R = SpatialRelation;

namespace {

/// Replays a fixed vote list; entries without a relation are malformed replies.
class VotingOracle final : public Oracle {
 public:
  std::vector<std::optional<InterventionJudgment>> votes;
  mutable std::vector<R> forced_seen;

  PrecedenceEstimate query_precedence(const SceneObject&, const SceneObject&) const override { return {}; }
  double query_edge_prior(const EdgeQuery&) const override { return 0.5; }
  double query_edge_trials(const EdgeQuery&, int) const override { return 0.5; }
  InterventionJudgment query_intervention_judgment(const EdgeQuery& q, const RenderedView& view,
                                                   int trial) const override {
    CHECK(view.viewpoint == Viewpoint::ThreeQuarter);
    forced_seen.push_back(q.edge.relation);
    const auto& v = votes.at(static_cast<std::size_t>(trial - 1));
    if (!v) fail(ErrorKind::MalformedResponse, "garbled");
    return *v;
  }
  int query_scale_score(const EdgeQuery&, const RenderedView&, const LayoutScene&) const override { return 0; }
  AxisScores query_position_scores(const EdgeQuery&, const RenderedView&, const LayoutScene&) const override {
    return {};
  }
  std::optional<CausalEdge> propose_support_edge(const SceneObject&, const CausalSceneGraph&) const override {
    return std::nullopt;
  }
};

CausalSceneGraph cup_table(R rel) {
  return graph_of({object("table", 120, 60, 75), object("cup", 8, 8, 10)}, {edge("cup", rel, "table")});
}

}  // namespace

TEST_CASE("candidate states exclude the current relation") {
  for (auto rel : kAllRelations) {
    auto s = candidate_states(edge("a", rel, "b"));
    CHECK(s.size() == 14);
    CHECK(std::find(s.begin(), s.end(), rel) == s.end());
    CHECK(std::is_sorted(s.begin(), s.end()));
  }
}

TEST_CASE("state probability counts votes over K") {
  auto g = cup_table(R::under);
  auto scene = place_graph(g);
  VotingOracle oracle;
  oracle.votes = {InterventionJudgment::modify(R::on), InterventionJudgment::modify(R::on),
                  InterventionJudgment::keep(), InterventionJudgment::modify(R::on),
                  InterventionJudgment::keep()};
  auto dist = state_probability(g.edges[0], R::above, g, scene, ProxyRenderer{}, oracle, 5);
  CHECK(dist.size() == 2);
  CHECK(dist.at(R::on) == doctest::Approx(0.6));
  CHECK(dist.at(R::above) == doctest::Approx(0.4));
  CHECK(oracle.forced_seen.front() == R::above);

  VotingOracle single;
  single.votes = {InterventionJudgment::keep()};
  auto one = state_probability(g.edges[0], R::left, g, scene, ProxyRenderer{}, single, 1);
  CHECK(one.at(R::left) == 1.0);
}

TEST_CASE("malformed trials vote for nothing") {
  auto g = cup_table(R::under);
  auto scene = place_graph(g);
  VotingOracle oracle;
  oracle.votes = {InterventionJudgment::keep(), std::nullopt, InterventionJudgment::modify(R::on),
                  std::nullopt, std::nullopt};
  auto dist = state_probability(g.edges[0], R::in, g, scene, ProxyRenderer{}, oracle, 5);
  double total = 0;
  for (auto [rel, p] : dist) total += p;
  CHECK(total == doctest::Approx(0.4));
}

TEST_CASE("select_state sums and renormalizes") {
  std::vector<StateDistribution> all_on(14, StateDistribution{{R::on, 1.0}});
  auto [s, p] = select_state(all_on);
  CHECK(s == R::on);
  CHECK(p == doctest::Approx(1.0));

  // 8.4 and 5.6 summed over 14 results.
  std::vector<StateDistribution> mixed(14, StateDistribution{{R::on, 0.6}, {R::above, 0.4}});
  auto [s2, p2] = select_state(mixed);
  CHECK(s2 == R::on);
  CHECK(p2 == doctest::Approx(0.6));

  std::vector<StateDistribution> tie{{{R::right, 1.0}}, {{R::left, 1.0}}};
  CHECK(select_state(tie).first == R::left);
  CHECK_THROWS_AS(select_state({}), Error);
}

TEST_CASE("selection is invariant under candidate order") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.2);
  std::vector<StateDistribution> results;
  for (int i = 0; i < 14; ++i) {
    StateDistribution d;
    for (auto r : kAllRelations) {
      if (u(rng) < 0.05) d[r] = std::round(u(rng) * 25) / 5;
    }
    results.push_back(d);
  }
  auto expected = select_state(results);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(results.begin(), results.end(), rng);
    CHECK(select_state(results).first == expected.first);
    CHECK(select_state(results).second == doctest::Approx(expected.second));
  }
}

TEST_CASE("deterministic oracle interventions recover the truth") {
  auto truth = cup_table(R::on);
  DeterministicOracle oracle(ground_truth_from_graph(truth));
  for (auto current : {R::under, R::above, R::in, R::on}) {
    auto g = cup_table(current);
    LayoutParams loose;
    loose.strict_containment = false;
    auto scene = place_graph(g, loose);
    auto result = intervene_edge(g.edges[0], g, scene, ProxyRenderer{}, oracle, 5);
    CHECK(result.s_star == R::on);
    CHECK(result.s_star_posterior == doctest::Approx(1.0));
    CHECK(result.distribution.at(R::on) == doctest::Approx(1.0));
  }
}

TEST_CASE("interventions need both endpoints placed") {
  auto g = cup_table(R::on);
  DeterministicOracle oracle(ground_truth_from_graph(g));
  CHECK_THROWS_AS(state_probability(g.edges[0], R::left, g, LayoutScene{}, ProxyRenderer{}, oracle, 5),
                  Error);
}
