#include "causalstruct/intervention.hpp"

#include "causalstruct/error.hpp"

namespace causalstruct {

std::vector<SpatialRelation> candidate_states(const CausalEdge& edge) {
  std::vector<SpatialRelation> out;
  out.reserve(kRelationCount - 1);
  for (auto rel : kAllRelations) {
    if (rel != edge.relation) out.push_back(rel);
  }
  return out;
}

namespace {

LayoutScene force_relation(const CausalEdge& edge, SpatialRelation forced,
                           const LayoutScene& scene, const LayoutParams& params) {
  LayoutScene out = scene;
  auto& subject = out.at(edge.subject);
  const auto target = out.at(edge.target).aabb();
  try {
    subject.center = relation_offset(forced, subject.extent(), target, params);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DoesNotFit) throw;
    LayoutParams loose = params;
    loose.strict_containment = false;
    subject.center = relation_offset(forced, subject.extent(), target, loose);
  }
  return out;
}

}  // namespace

StateDistribution state_probability(const CausalEdge& edge, SpatialRelation forced,
                                    const CausalSceneGraph& graph, const LayoutScene& scene,
                                    const Renderer& renderer, const Oracle& oracle, int trials,
                                    const LayoutParams& params) {
  if (trials < 1) fail(ErrorKind::PreconditionViolation, "trial count must be at least 1");
  if (!scene.find(edge.subject) || !scene.find(edge.target)) {
    fail(ErrorKind::PreconditionViolation, "intervention scene does not place both endpoints");
  }
  CausalEdge forced_edge = edge;
  forced_edge.relation = forced;
  const auto view = renderer.render(force_relation(edge, forced, scene, params),
                                    Viewpoint::ThreeQuarter);
  const auto query = EdgeQuery::from(graph, forced_edge);

  std::map<SpatialRelation, int> votes;
  for (int k = 1; k <= trials; ++k) {
    try {
      auto judgment = oracle.query_intervention_judgment(query, view, k);
      if (judgment.action == JudgmentAction::Keep) {
        ++votes[forced];
      } else if (judgment.updated_relation) {
        ++votes[*judgment.updated_relation];
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MalformedResponse) throw;
    }
  }
  StateDistribution out;
  for (auto [rel, n] : votes) out[rel] = static_cast<double>(n) / trials;
  return out;
}

std::pair<SpatialRelation, double> select_state(const std::vector<StateDistribution>& results) {
  if (results.empty()) fail(ErrorKind::PreconditionViolation, "no intervention results to select from");
  std::map<SpatialRelation, double> mass;
  for (const auto& dist : results) {
    for (auto [rel, p] : dist) mass[rel] += p;
  }
  SpatialRelation best = kAllRelations.front();
  double best_mass = -1.0;
  for (auto rel : kAllRelations) {
    auto it = mass.find(rel);
    double m = it == mass.end() ? 0.0 : it->second;
    if (m > best_mass) {
      best = rel;
      best_mass = m;
    }
  }
  return {best, best_mass / static_cast<double>(results.size())};
}

InterventionResult intervene_edge(const CausalEdge& edge, const CausalSceneGraph& graph,
                                  const LayoutScene& scene, const Renderer& renderer,
                                  const Oracle& oracle, int trials, const LayoutParams& params) {
  std::vector<StateDistribution> results;
  for (auto r : candidate_states(edge)) {
    results.push_back(state_probability(edge, r, graph, scene, renderer, oracle, trials, params));
  }
  InterventionResult out;
  out.edge = edge;
  for (const auto& dist : results) {
    for (auto [rel, p] : dist) out.distribution[rel] += p / static_cast<double>(results.size());
  }
  std::tie(out.s_star, out.s_star_posterior) = select_state(results);
  return out;
}

}  // namespace causalstruct
