#pragma once

#include <map>
#include <vector>

#include "causalstruct/graph.hpp"
#include "causalstruct/layout.hpp"
#include "causalstruct/oracle.hpp"
#include "causalstruct/render.hpp"

namespace causalstruct {

using StateDistribution = std::map<SpatialRelation, double>;

struct InterventionResult {
  CausalEdge edge;
  StateDistribution distribution;  // summed mass divided by the candidate count
  SpatialRelation s_star = SpatialRelation::on;
  double s_star_posterior = 0.0;
};

/// Every vocabulary word except the edge's current relation, in vocabulary order.
std::vector<SpatialRelation> candidate_states(const CausalEdge& edge);

/// Forces the edge into `forced`, re-places the subject against the target,
/// renders the three-quarter view and tallies K judgments as fractions of K.
/// Keep votes for `forced`, Modify(rel) for rel, malformed replies for nothing.
StateDistribution state_probability(const CausalEdge& edge, SpatialRelation forced,
                                    const CausalSceneGraph& graph, const LayoutScene& scene,
                                    const Renderer& renderer, const Oracle& oracle, int trials,
                                    const LayoutParams& params = {});

/// Sums the per-candidate distributions and picks the heaviest state; ties go
/// to the earlier vocabulary word. The mass is divided by the result count.
std::pair<SpatialRelation, double> select_state(const std::vector<StateDistribution>& results);

InterventionResult intervene_edge(const CausalEdge& edge, const CausalSceneGraph& graph,
                                  const LayoutScene& scene, const Renderer& renderer,
                                  const Oracle& oracle, int trials,
                                  const LayoutParams& params = {});

}  // namespace causalstruct
