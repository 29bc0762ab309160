#include "causalstruct/causal_order.hpp"

#include <map>
#include <tuple>

#include "causalstruct/error.hpp"

namespace causalstruct {

namespace {

CausalEdge reversed(const CausalEdge& edge) {
  CausalEdge out = edge;
  std::swap(out.subject, out.target);
  if (auto inv = inverse_relation(edge.relation)) out.relation = *inv;
  return out;
}

}  // namespace

CausalEdge order_edge(const CausalEdge& edge, const CausalSceneGraph& graph, const Oracle& oracle) {
  if (!edge.active()) return edge;
  auto estimate = oracle.query_precedence(graph.node(edge.subject), graph.node(edge.target));
  CausalEdge out = estimate.c_ji > estimate.c_ij ? reversed(edge) : edge;
  out.status = EdgeStatus::Ordered;
  return out;
}

CausalEdge apply_size_rule(const CausalEdge& edge, const CausalSceneGraph& graph) {
  if (!edge.active() || !inverse_relation(edge.relation)) return edge;
  const double subject_volume = graph.node(edge.subject).dims.volume_cm3();
  const double target_volume = graph.node(edge.target).dims.volume_cm3();
  return subject_volume > target_volume ? reversed(edge) : edge;
}

CausalSceneGraph order_graph(const CausalSceneGraph& graph, const Oracle& oracle) {
  CausalSceneGraph out = graph;
  for (auto& edge : out.edges) {
    if (!edge.active()) continue;
    edge = order_edge(apply_size_rule(edge, graph), graph, oracle);
  }
  return out;
}

CausalSceneGraph complete_edges(const CausalSceneGraph& graph, const Oracle& oracle) {
  CausalSceneGraph out = graph;
  if (out.nodes.size() < 2) return out;
  for (const auto& id : isolated_nodes(graph)) {
    // An earlier completion may already have connected this object.
    bool still_isolated = true;
    for (auto i : out.active_edges()) {
      if (out.edges[i].subject == id || out.edges[i].target == id) still_isolated = false;
    }
    if (!still_isolated) continue;

    auto proposal = oracle.propose_support_edge(out.node(id), out);
    if (!proposal || proposal->subject == proposal->target || !out.contains(proposal->subject) ||
        !out.contains(proposal->target) ||
        (proposal->subject != id && proposal->target != id)) {
      fail(ErrorKind::CompletionFailed, "no supporting edge for isolated object '" + id + "'");
    }
    proposal->status = EdgeStatus::Proposed;
    proposal->posterior.reset();
    out.edges.push_back(*proposal);
  }
  return out;
}

CausalSceneGraph enforce_dag(const CausalSceneGraph& graph) {
  CausalSceneGraph out = graph;

  std::map<std::pair<std::string, std::string>, std::size_t> best;
  for (auto i : out.active_edges()) {
    auto key = std::make_pair(out.edges[i].subject, out.edges[i].target);
    auto [it, inserted] = best.emplace(key, i);
    if (inserted) continue;
    if (out.edges[i].prior > out.edges[it->second].prior) {
      out.edges[it->second].status = EdgeStatus::Removed;
      it->second = i;
    } else {
      out.edges[i].status = EdgeStatus::Removed;
    }
  }

  for (auto cycle = find_cycle(out); !cycle.empty(); cycle = find_cycle(out)) {
    std::size_t victim = cycle.front();
    for (auto i : cycle) {
      const auto& e = out.edges[i];
      const auto& v = out.edges[victim];
      if (std::tie(e.prior, e.subject, e.target) < std::tie(v.prior, v.subject, v.target)) {
        victim = i;
      }
    }
    out.edges[victim].status = EdgeStatus::Removed;
  }
  return out;
}

}  // namespace causalstruct
