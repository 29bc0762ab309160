#include "causalstruct/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "causalstruct/error.hpp"

namespace causalstruct {

std::string_view to_string(EdgeStatus status) {
  switch (status) {
    case EdgeStatus::Proposed: return "proposed";
    case EdgeStatus::Ordered: return "ordered";
    case EdgeStatus::Kept: return "kept";
    case EdgeStatus::Modified: return "modified";
    case EdgeStatus::Removed: return "removed";
  }
  return "proposed";
}

EdgeStatus parse_edge_status(std::string_view text) {
  for (auto status : {EdgeStatus::Proposed, EdgeStatus::Ordered, EdgeStatus::Kept,
                      EdgeStatus::Modified, EdgeStatus::Removed}) {
    if (to_string(status) == text) return status;
  }
  fail(ErrorKind::DecodeError, "unknown edge status '" + std::string(text) + "'");
}

const SceneObject& CausalSceneGraph::node(const std::string& id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) fail(ErrorKind::UnknownObject, "no object '" + id + "'");
  return it->second;
}

SceneObject& CausalSceneGraph::node(const std::string& id) {
  auto it = nodes.find(id);
  if (it == nodes.end()) fail(ErrorKind::UnknownObject, "no object '" + id + "'");
  return it->second;
}

std::vector<std::size_t> CausalSceneGraph::active_edges() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].active()) out.push_back(i);
  }
  return out;
}

std::optional<std::size_t> CausalSceneGraph::find_edge(const std::string& subject,
                                                       const std::string& target) const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.active() && e.subject == subject && e.target == target) return i;
  }
  return std::nullopt;
}

void validate_object(const SceneObject& object) {
  const auto& d = object.dims;
  if (object.id.empty()) fail(ErrorKind::InvalidGraph, "object with empty id");
  if (!(d.length_cm > 0.0) || !(d.width_cm > 0.0) || !(d.height_cm > 0.0) ||
      !std::isfinite(d.volume_cm3())) {
    fail(ErrorKind::InvalidGraph, "object '" + object.id + "' needs positive finite dimensions");
  }
  if (!(object.scale > 0.0) || !std::isfinite(object.scale)) {
    fail(ErrorKind::InvalidGraph, "object '" + object.id + "' needs a positive scale");
  }
}

void validate_edge(const CausalEdge& edge) {
  if (edge.subject == edge.target) {
    fail(ErrorKind::InvalidGraph, "self-loop on '" + edge.subject + "'");
  }
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(edge.prior)) fail(ErrorKind::InvalidGraph, "edge prior outside [0,1]");
  if (edge.posterior && !in_unit(*edge.posterior)) {
    fail(ErrorKind::InvalidGraph, "edge posterior outside [0,1]");
  }
}

void validate(const CausalSceneGraph& graph) {
  for (const auto& [id, object] : graph.nodes) {
    if (id != object.id) fail(ErrorKind::InvalidGraph, "node key '" + id + "' != object id");
    validate_object(object);
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& edge : graph.edges) {
    validate_edge(edge);
    if (!graph.contains(edge.subject) || !graph.contains(edge.target)) {
      fail(ErrorKind::InvalidGraph,
           "edge [" + edge.subject + ", " + edge.target + "] references an unknown object");
    }
    if (edge.active() && !pairs.emplace(edge.subject, edge.target).second) {
      fail(ErrorKind::InvalidGraph,
           "duplicate edge for pair (" + edge.subject + ", " + edge.target + ")");
    }
  }
}

std::vector<std::size_t> find_cycle(const CausalSceneGraph& graph) {
  std::map<std::string, std::vector<std::size_t>> outgoing;
  for (auto i : graph.active_edges()) outgoing[graph.edges[i].subject].push_back(i);

  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark> mark;
  for (const auto& [id, _] : graph.nodes) mark[id] = Mark::White;

  std::vector<std::size_t> stack;  // edges along the current DFS path
  std::vector<std::size_t> cycle;

  std::function<bool(const std::string&)> visit = [&](const std::string& id) {
    mark[id] = Mark::Grey;
    for (auto ei : outgoing[id]) {
      const auto& next = graph.edges[ei].target;
      if (mark[next] == Mark::Grey) {
        // Unwind the path back to where `next` was entered.
        cycle.push_back(ei);
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
          cycle.push_back(*it);
          if (graph.edges[*it].subject == next) break;
        }
        std::reverse(cycle.begin(), cycle.end());
        return true;
      }
      if (mark[next] == Mark::White) {
        stack.push_back(ei);
        if (visit(next)) return true;
        stack.pop_back();
      }
    }
    mark[id] = Mark::Black;
    return false;
  };

  for (const auto& [id, _] : graph.nodes) {
    if (mark[id] == Mark::White && visit(id)) break;
  }
  return cycle;
}

std::vector<std::string> topological_order(const CausalSceneGraph& graph) {
  std::map<std::string, int> pending;  // unplaced anchors per object
  std::map<std::string, std::vector<std::string>> dependents;
  for (const auto& [id, _] : graph.nodes) pending[id] = 0;
  for (auto i : graph.active_edges()) {
    const auto& e = graph.edges[i];
    if (!graph.contains(e.subject) || !graph.contains(e.target)) {
      fail(ErrorKind::InvalidGraph, "edge endpoint missing from nodes");
    }
    ++pending[e.subject];
    dependents[e.target].push_back(e.subject);
  }

  std::set<std::string> ready;
  for (const auto& [id, count] : pending) {
    if (count == 0) ready.insert(id);
  }
  std::vector<std::string> order;
  order.reserve(graph.nodes.size());
  while (!ready.empty()) {
    auto id = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(id);
    for (const auto& dep : dependents[id]) {
      if (--pending[dep] == 0) ready.insert(dep);
    }
  }

  if (order.size() != graph.nodes.size()) {
    std::string desc;
    for (auto i : find_cycle(graph)) {
      const auto& e = graph.edges[i];
      desc += "[" + e.subject + ", " + std::string(to_string(e.relation)) + ", " + e.target + "] ";
    }
    fail(ErrorKind::CycleDetected, "cycle through " + desc);
  }
  return order;
}

std::vector<std::string> isolated_nodes(const CausalSceneGraph& graph) {
  std::set<std::string> touched;
  for (auto i : graph.active_edges()) {
    touched.insert(graph.edges[i].subject);
    touched.insert(graph.edges[i].target);
  }
  std::vector<std::string> out;
  for (const auto& [id, _] : graph.nodes) {
    if (!touched.count(id)) out.push_back(id);
  }
  return out;
}

}  // namespace causalstruct
