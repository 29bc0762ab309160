#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "causalstruct/graph.hpp"
#include "causalstruct/oracle.hpp"

namespace causalstruct {

/// Trial fractions are floored here before entering a likelihood product.
inline constexpr double kLikelihoodFloor = 1e-3;
inline constexpr int kDefaultTrials = 5;

struct Thresholds {
  double tau1 = 0.7;  // keep above this posterior
  double tau2 = 0.5;  // accept the intervention state above this
};

void validate(const Thresholds& thresholds);

/// Keep and Intervene come from screening; Remove marks an edge the update dropped.
enum class EdgeDecision { Keep, Intervene, Remove };

struct EdgeAssessment {
  CausalEdge edge;
  double prior = 0.0;
  double likelihood = 0.0;  // L1: evidence given the edge is correct
  double posterior = 0.0;
  EdgeDecision decision = EdgeDecision::Intervene;
};

double floor_fraction(double fraction);

/// Product of floored per-edge trial fractions.
double order_likelihood(std::span<const double> fractions);

/// Likelihood of the ordered edge set from oracle trials over `order_edges`.
double order_likelihood(const std::vector<CausalEdge>& order_edges, const CausalSceneGraph& graph,
                        const Oracle& oracle, int trials);

/// Two-hypothesis Bayes rule: L1 p / (L1 p + L0 (1 - p)).
double bayes_posterior(double prior, double likelihood_correct, double likelihood_incorrect);

/// Posterior of `edge` given trial evidence on `order_edges`. L0 is the same
/// product with the edge's own fraction complemented. The edge's own factor
/// is always part of the evidence, whether or not it is listed.
double edge_posterior(const CausalEdge& edge, const std::vector<CausalEdge>& order_edges,
                      const CausalSceneGraph& graph, const Oracle& oracle, int trials);

/// Same, over precomputed fractions: `own` indexes the edge within `fractions`.
double edge_posterior(double prior, std::span<const double> fractions, std::size_t own);

/// Assesses every active edge: oracle prior, trial fractions (queried once
/// per edge), posterior and the keep/intervene decision.
std::vector<EdgeAssessment> assess_edges(const CausalSceneGraph& graph, const Oracle& oracle,
                                         int trials, const Thresholds& thresholds);

struct InterventionOutcome {
  SpatialRelation s_star = SpatialRelation::on;
  double posterior = 0.0;
};

using EdgeKey = std::pair<std::string, std::string>;
using InterventionMap = std::map<EdgeKey, InterventionOutcome>;

enum class UpdateBranch { Kept, Modified, Removed };

/// Exactly one branch of the keep/modify/remove rule. Throws
/// MissingIntervention when a low-posterior edge has no intervention result.
UpdateBranch classify_edge(double posterior, std::optional<double> s_star_posterior,
                           const Thresholds& thresholds);

/// Applies the keep/modify/remove rule to every assessed edge of `graph`.
CausalSceneGraph update_strategy(const CausalSceneGraph& graph,
                                 const std::vector<EdgeAssessment>& assessments,
                                 const Thresholds& thresholds,
                                 const InterventionMap& interventions);

}  // namespace causalstruct
