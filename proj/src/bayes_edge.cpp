#include "causalstruct/bayes_edge.hpp"

#include <algorithm>

#include "causalstruct/error.hpp"

namespace causalstruct {

void validate(const Thresholds& t) {
  if (!(t.tau1 > 0.0 && t.tau1 < 1.0) || !(t.tau2 > 0.0 && t.tau2 < 1.0)) {
    fail(ErrorKind::ConfigError, "thresholds must lie in (0, 1)");
  }
}

double floor_fraction(double fraction) {
  return std::max(std::clamp(fraction, 0.0, 1.0), kLikelihoodFloor);
}

double order_likelihood(std::span<const double> fractions) {
  double product = 1.0;
  for (double f : fractions) product *= floor_fraction(f);
  return product;
}

namespace {

std::vector<double> trial_fractions(const std::vector<CausalEdge>& edges,
                                    const CausalSceneGraph& graph, const Oracle& oracle,
                                    int trials) {
  std::vector<double> out;
  out.reserve(edges.size());
  for (const auto& e : edges) {
    out.push_back(oracle.query_edge_trials(EdgeQuery::from(graph, e), trials));
  }
  return out;
}

}  // namespace

double order_likelihood(const std::vector<CausalEdge>& order_edges, const CausalSceneGraph& graph,
                        const Oracle& oracle, int trials) {
  if (trials < 1) fail(ErrorKind::PreconditionViolation, "trial count must be at least 1");
  if (order_edges.empty()) fail(ErrorKind::PreconditionViolation, "empty order edge set");
  auto fractions = trial_fractions(order_edges, graph, oracle, trials);
  return order_likelihood(fractions);
}

double bayes_posterior(double prior, double likelihood_correct, double likelihood_incorrect) {
  const double joint_correct = likelihood_correct * prior;
  const double joint_incorrect = likelihood_incorrect * (1.0 - prior);
  const double evidence = joint_correct + joint_incorrect;
  if (!(evidence > 0.0)) return prior;
  return joint_correct / evidence;
}

double edge_posterior(double prior, std::span<const double> fractions, std::size_t own) {
  if (own >= fractions.size()) fail(ErrorKind::PreconditionViolation, "edge index out of range");
  double others = 1.0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (i != own) others *= floor_fraction(fractions[i]);
  }
  const double l1 = others * floor_fraction(fractions[own]);
  const double l0 = others * floor_fraction(1.0 - fractions[own]);
  return bayes_posterior(prior, l1, l0);
}

double edge_posterior(const CausalEdge& edge, const std::vector<CausalEdge>& order_edges,
                      const CausalSceneGraph& graph, const Oracle& oracle, int trials) {
  if (trials < 1) fail(ErrorKind::PreconditionViolation, "trial count must be at least 1");
  std::vector<CausalEdge> evidence = order_edges;
  auto same_pair = [&](const CausalEdge& e) {
    return e.subject == edge.subject && e.target == edge.target && e.relation == edge.relation;
  };
  auto it = std::find_if(evidence.begin(), evidence.end(), same_pair);
  std::size_t own = static_cast<std::size_t>(it - evidence.begin());
  if (it == evidence.end()) evidence.push_back(edge);
  auto fractions = trial_fractions(evidence, graph, oracle, trials);
  return edge_posterior(edge.prior, fractions, own);
}

std::vector<EdgeAssessment> assess_edges(const CausalSceneGraph& graph, const Oracle& oracle,
                                         int trials, const Thresholds& thresholds) {
  if (trials < 1) fail(ErrorKind::PreconditionViolation, "trial count must be at least 1");
  std::vector<CausalEdge> active;
  for (auto i : graph.active_edges()) active.push_back(graph.edges[i]);
  const auto fractions = trial_fractions(active, graph, oracle, trials);

  std::vector<EdgeAssessment> out;
  out.reserve(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) {
    EdgeAssessment a;
    a.edge = active[k];
    a.prior = active[k].prior;
    a.likelihood = order_likelihood(fractions);
    a.posterior = edge_posterior(a.prior, fractions, k);
    a.decision = a.posterior > thresholds.tau1 ? EdgeDecision::Keep : EdgeDecision::Intervene;
    out.push_back(std::move(a));
  }
  return out;
}

UpdateBranch classify_edge(double posterior, std::optional<double> s_star_posterior,
                           const Thresholds& thresholds) {
  if (posterior > thresholds.tau1) return UpdateBranch::Kept;
  if (!s_star_posterior) {
    fail(ErrorKind::MissingIntervention, "low-confidence edge has no intervention result");
  }
  return *s_star_posterior > thresholds.tau2 ? UpdateBranch::Modified : UpdateBranch::Removed;
}

CausalSceneGraph update_strategy(const CausalSceneGraph& graph,
                                 const std::vector<EdgeAssessment>& assessments,
                                 const Thresholds& thresholds,
                                 const InterventionMap& interventions) {
  validate(thresholds);
  CausalSceneGraph out = graph;
  for (const auto& a : assessments) {
    auto index = out.find_edge(a.edge.subject, a.edge.target);
    if (!index) {
      fail(ErrorKind::PreconditionViolation,
           "assessed edge (" + a.edge.subject + ", " + a.edge.target + ") is not in the graph");
    }
    auto& edge = out.edges[*index];
    auto it = interventions.find({a.edge.subject, a.edge.target});
    std::optional<double> s_star_posterior;
    if (it != interventions.end()) s_star_posterior = it->second.posterior;

    switch (classify_edge(a.posterior, s_star_posterior, thresholds)) {
      case UpdateBranch::Kept:
        edge.posterior = a.posterior;
        edge.status = EdgeStatus::Kept;
        break;
      case UpdateBranch::Modified:
        edge.relation = it->second.s_star;
        edge.posterior = it->second.posterior;
        edge.status = EdgeStatus::Modified;
        break;
      case UpdateBranch::Removed:
        edge.posterior = a.posterior;
        edge.status = EdgeStatus::Removed;
        break;
    }
  }
  return out;
}

}  // namespace causalstruct
