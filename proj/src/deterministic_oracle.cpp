#include "causalstruct/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "causalstruct/error.hpp"

namespace causalstruct {

int clamp_score(double raw) {
  if (std::isnan(raw)) return 0;
  double r = std::round(raw);
  return static_cast<int>(std::clamp(r, -double(kScoreLimit), double(kScoreLimit)));
}

EdgeQuery EdgeQuery::from(const CausalSceneGraph& graph, const CausalEdge& edge) {
  return {edge, graph.node(edge.subject), graph.node(edge.target)};
}

std::optional<SpatialRelation> GroundTruth::relation(const std::string& subject,
                                                     const std::string& target) const {
  auto it = true_relations.find({subject, target});
  if (it == true_relations.end()) return std::nullopt;
  return it->second;
}

bool GroundTruth::depends_on(const std::string& from, const std::string& to) const {
  std::set<std::string> seen{from};
  std::vector<std::string> frontier{from};
  while (!frontier.empty()) {
    auto cur = frontier.back();
    frontier.pop_back();
    for (const auto& [pair, _] : true_relations) {
      if (pair.first != cur) continue;
      if (pair.second == to) return true;
      if (seen.insert(pair.second).second) frontier.push_back(pair.second);
    }
  }
  return false;
}

GroundTruth ground_truth_from_graph(const CausalSceneGraph& reference, const LayoutParams& params) {
  GroundTruth truth;
  for (auto i : reference.active_edges()) {
    const auto& e = reference.edges[i];
    truth.true_relations[{e.subject, e.target}] = e.relation;
  }
  auto placed = resolve_overlaps(place_graph(reference, params), reference, params).scene;
  for (const auto& o : placed.objects) {
    truth.true_scales[o.id] = o.scale;
    truth.true_positions[o.id] = o.center;
    truth.reference_extent[o.id] = o.extent();
  }
  return truth;
}

namespace {

template <typename Map>
const auto& require_entry(const Map& map, const std::string& id, const char* what) {
  auto it = map.find(id);
  if (it == map.end()) {
    fail(ErrorKind::PreconditionViolation, std::string("ground truth has no ") + what + " for '" +
                                               id + "'");
  }
  return it->second;
}

}  // namespace

PrecedenceEstimate DeterministicOracle::query_precedence(const SceneObject& a,
                                                         const SceneObject& b) const {
  if (a.id == b.id) fail(ErrorKind::PreconditionViolation, "precedence of an object with itself");
  if (truth_.depends_on(a.id, b.id)) return {kConfident, kDoubtful};
  if (truth_.depends_on(b.id, a.id)) return {kDoubtful, kConfident};
  return {kUnknown, kUnknown};
}

double DeterministicOracle::query_edge_prior(const EdgeQuery& query) const {
  const auto& e = query.edge;
  if (auto rel = truth_.relation(e.subject, e.target)) {
    return *rel == e.relation ? kPriorMatch : kPriorOtherRelation;
  }
  if (truth_.relation(e.target, e.subject)) return kPriorOtherRelation;
  return kPriorAbsent;
}

double DeterministicOracle::query_edge_trials(const EdgeQuery& query, int trials) const {
  if (trials < 1) fail(ErrorKind::PreconditionViolation, "trial count must be at least 1");
  auto rel = truth_.relation(query.edge.subject, query.edge.target);
  return rel && *rel == query.edge.relation ? 1.0 : 0.0;
}

InterventionJudgment DeterministicOracle::query_intervention_judgment(const EdgeQuery& query,
                                                                      const RenderedView&,
                                                                      int) const {
  const auto& e = query.edge;
  if (auto rel = truth_.relation(e.subject, e.target)) {
    return *rel == e.relation ? InterventionJudgment::keep() : InterventionJudgment::modify(*rel);
  }
  if (auto reversed = truth_.relation(e.target, e.subject)) {
    auto inv = inverse_relation(*reversed);
    if (inv && *inv != e.relation) return InterventionJudgment::modify(*inv);
  }
  // No opinion about this pair.
  return InterventionJudgment::keep();
}

int DeterministicOracle::query_scale_score(const EdgeQuery& query, const RenderedView&,
                                           const LayoutScene& scene) const {
  const double current = scene.at(query.edge.subject).scale;
  const double expected = require_entry(truth_.true_scales, query.edge.subject, "scale");
  return clamp_score(100.0 * (current - expected) / expected);
}

AxisScores DeterministicOracle::query_position_scores(const EdgeQuery& query, const RenderedView&,
                                                      const LayoutScene& scene) const {
  const Vec3 current = scene.at(query.edge.subject).center;
  const Vec3 desired = require_entry(truth_.true_positions, query.edge.subject, "position");
  const Vec3 extent = require_entry(truth_.reference_extent, query.edge.target, "extent");
  auto axis = [&](int k) { return clamp_score(100.0 * (current[k] - desired[k]) / extent[k]); };
  return {axis(0), axis(1), axis(2)};
}

std::optional<CausalEdge> DeterministicOracle::propose_support_edge(
    const SceneObject& isolated, const CausalSceneGraph& graph) const {
  auto make = [](const std::string& s, SpatialRelation r, const std::string& t) {
    CausalEdge e;
    e.subject = s;
    e.relation = r;
    e.target = t;
    e.status = EdgeStatus::Proposed;
    return e;
  };
  for (const auto& [pair, rel] : truth_.true_relations) {
    if (pair.first == isolated.id && pair.second != isolated.id && graph.contains(pair.second)) {
      return make(pair.first, rel, pair.second);
    }
  }
  for (const auto& [pair, rel] : truth_.true_relations) {
    if (pair.second == isolated.id && pair.first != isolated.id && graph.contains(pair.first)) {
      return make(pair.first, rel, pair.second);
    }
  }
  return std::nullopt;
}

}  // namespace causalstruct
