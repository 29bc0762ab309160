#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "causalstruct/bayes_edge.hpp"
#include "causalstruct/error.hpp"
#include "test_support.hpp"

using namespace causalstruct;
using namespace cs_test;
using R = SpatialRelation;

TEST_CASE("order likelihood multiplies floored fractions") {
  std::vector<double> a{0.9, 0.8};
  CHECK(order_likelihood(a) == doctest::Approx(0.72));
  std::vector<double> ones{1.0, 1.0, 1.0};
  CHECK(order_likelihood(ones) == 1.0);
  std::vector<double> zero{1.0, 0.0};
  CHECK(order_likelihood(zero) == doctest::Approx(1e-3));
}

TEST_CASE("order likelihood through the oracle") {
  auto g = graph_of({object("a", 1, 1, 1), object("b", 1, 1, 1), object("c", 1, 1, 1)},
                    {edge("a", R::on, "b"), edge("b", R::on, "c")});
  TableOracle oracle;
  oracle.fractions = {{{"a", "b"}, 0.9}, {{"b", "c"}, 0.8}};
  CHECK(order_likelihood(g.edges, g, oracle, 5) == doctest::Approx(0.72));
  CHECK_THROWS_AS(order_likelihood(g.edges, g, oracle, 0), Error);
  CHECK_THROWS_AS(order_likelihood({}, g, oracle, 5), Error);
}

TEST_CASE("two-hypothesis Bayes rule") {
  CHECK(bayes_posterior(0.5, 0.3, 0.3) == doctest::Approx(0.5));
  CHECK(bayes_posterior(0.5, 0.9, 0.1) == doctest::Approx(0.9));
  CHECK(bayes_posterior(0.2, 0.9, 0.1) == doctest::Approx(0.18 / 0.26));
}

TEST_CASE("edge posterior complements only the edge's own fraction") {
  std::vector<double> f{0.8, 0.6};
  // L1 = 0.8 * 0.6, L0 = 0.2 * 0.6
  double expected = (0.48 * 0.3) / (0.48 * 0.3 + 0.12 * 0.7);
  CHECK(edge_posterior(0.3, f, 0) == doctest::Approx(expected));
  CHECK_THROWS_AS(edge_posterior(0.3, f, 2), Error);

  auto g = graph_of({object("a", 1, 1, 1), object("b", 1, 1, 1), object("c", 1, 1, 1)},
                    {edge("a", R::on, "b", EdgeStatus::Ordered, 0.3), edge("b", R::on, "c")});
  TableOracle oracle;
  oracle.fractions = {{{"a", "b"}, 0.8}, {{"b", "c"}, 0.6}};
  CHECK(edge_posterior(g.edges[0], g.edges, g, oracle, 5) == doctest::Approx(expected));
  // Not listed as evidence: its own factor is added.
  std::vector<CausalEdge> others{g.edges[1]};
  CHECK(edge_posterior(g.edges[0], others, g, oracle, 5) == doctest::Approx(expected));
}

TEST_CASE("posterior stays strictly inside (0, 1) and is monotone in the prior") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> f{std::round(u(rng) * 5) / 5, std::round(u(rng) * 5) / 5,
                          std::round(u(rng) * 5) / 5};
    double p1 = 0.01 + 0.98 * u(rng);
    double p2 = 0.01 + 0.98 * u(rng);
    double a = edge_posterior(p1, f, 1);
    double b = edge_posterior(p2, f, 1);
    CHECK(a > 0.0);
    CHECK(a < 1.0);
    if (p1 <= p2) {
      CHECK(a <= b);
    } else {
      CHECK(a >= b);
    }
  }
}

TEST_CASE("assess_edges queries each edge once and flags low posteriors") {
  auto g = graph_of({object("a", 1, 1, 1), object("b", 1, 1, 1), object("c", 1, 1, 1)},
                    {edge("a", R::on, "b", EdgeStatus::Ordered, 0.9),
                     edge("b", R::on, "c", EdgeStatus::Ordered, 0.5),
                     edge("c", R::on, "a", EdgeStatus::Removed, 0.5)});
  TableOracle oracle;
  oracle.fractions = {{{"a", "b"}, 1.0}, {{"b", "c"}, 0.0}};
  auto out = assess_edges(g, oracle, 5, Thresholds{});
  CHECK(oracle.trial_queries == 2);
  REQUIRE(out.size() == 2);
  CHECK(out[0].decision == EdgeDecision::Keep);
  CHECK(out[1].decision == EdgeDecision::Intervene);
  CHECK(out[0].posterior > 0.99);
  CHECK(out[1].posterior < 0.01);
  CHECK(out[0].likelihood == doctest::Approx(1e-3));
}

TEST_CASE("update strategy branches") {
  auto g = graph_of({object("a", 1, 1, 1), object("b", 1, 1, 1), object("c", 1, 1, 1),
                     object("d", 1, 1, 1)},
                    {edge("a", R::on, "b", EdgeStatus::Ordered), edge("c", R::under, "b", EdgeStatus::Ordered),
                     edge("d", R::left, "b", EdgeStatus::Ordered)});
  auto assess = [](const CausalEdge& e, double posterior) {
    EdgeAssessment a;
    a.edge = e;
    a.posterior = posterior;
    return a;
  };
  std::vector<EdgeAssessment> as{assess(g.edges[0], 0.95), assess(g.edges[1], 0.4),
                                 assess(g.edges[2], 0.4)};
  InterventionMap iv{{{"c", "b"}, {R::on, 0.8}}, {{"d", "b"}, {R::right, 0.3}}};
  auto out = update_strategy(g, as, Thresholds{}, iv);
  CHECK(out.edges[0].status == EdgeStatus::Kept);
  CHECK(out.edges[0].relation == R::on);
  CHECK(out.edges[0].posterior == 0.95);
  CHECK(out.edges[1].status == EdgeStatus::Modified);
  CHECK(out.edges[1].relation == R::on);
  CHECK(out.edges[1].posterior == 0.8);
  CHECK(out.edges[2].status == EdgeStatus::Removed);
  CHECK(out.edges[2].relation == R::left);

  InterventionMap missing{{{"c", "b"}, {R::on, 0.8}}};
  try {
    update_strategy(g, as, Thresholds{}, missing);
    FAIL("expected MissingIntervention");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingIntervention);
  }
  CHECK_THROWS_AS(update_strategy(g, as, Thresholds{1.0, 0.5}, iv), Error);
}

TEST_CASE("classification boundaries") {
  Thresholds t;
  CHECK(classify_edge(0.7000001, std::nullopt, t) == UpdateBranch::Kept);
  CHECK(classify_edge(0.7, 0.51, t) == UpdateBranch::Modified);
  CHECK(classify_edge(0.7, 0.5, t) == UpdateBranch::Removed);
  CHECK_THROWS_AS(classify_edge(0.7, std::nullopt, t), Error);
}
