#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causalstruct/relation.hpp"

namespace causalstruct {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(Vec3 a, double k) { return {a.x * k, a.y * k, a.z * k}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Real-world size in centimeters: length along x, width along y, height along z.
struct Dimensions {
  double length_cm = 0.0;
  double width_cm = 0.0;
  double height_cm = 0.0;

  double volume_cm3() const { return length_cm * width_cm * height_cm; }
  friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

inline constexpr double kCentimetersToMeters = 0.01;

struct SceneObject {
  std::string id;
  std::string name;
  Dimensions dims;
  Vec3 position;  // meters, box center
  double scale = 1.0;
  std::optional<std::string> asset_ref;

  /// Scaled extent in meters per axis.
  Vec3 extent_m() const {
    return Vec3{dims.length_cm, dims.width_cm, dims.height_cm} * (kCentimetersToMeters * scale);
  }

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

enum class EdgeStatus { Proposed, Ordered, Kept, Modified, Removed };

std::string_view to_string(EdgeStatus status);
EdgeStatus parse_edge_status(std::string_view text);

/// Directed dependency: the subject's placement depends on the target.
struct CausalEdge {
  std::string subject;
  SpatialRelation relation = SpatialRelation::on;
  std::string target;
  double prior = 0.5;
  std::optional<double> posterior;
  EdgeStatus status = EdgeStatus::Proposed;

  bool active() const { return status != EdgeStatus::Removed; }
  /// Posterior when assessed, otherwise the prior.
  double confidence() const { return posterior.value_or(prior); }

  friend bool operator==(const CausalEdge&, const CausalEdge&) = default;
};

struct CausalSceneGraph {
  std::map<std::string, SceneObject> nodes;
  std::vector<CausalEdge> edges;
  std::string prompt;

  const SceneObject& node(const std::string& id) const;
  SceneObject& node(const std::string& id);
  bool contains(const std::string& id) const { return nodes.count(id) != 0; }

  /// Indices of non-Removed edges, in edge order.
  std::vector<std::size_t> active_edges() const;
  /// Index of the active edge for the ordered pair, if any.
  std::optional<std::size_t> find_edge(const std::string& subject, const std::string& target) const;

  friend bool operator==(const CausalSceneGraph&, const CausalSceneGraph&) = default;
};

void validate_object(const SceneObject& object);
void validate_edge(const CausalEdge& edge);

/// Checks object and edge invariants, endpoint existence and pair uniqueness.
/// Throws InvalidGraph.
void validate(const CausalSceneGraph& graph);

/// Anchors before dependents: for every active edge the target precedes the
/// subject. Ties resolve by ascending id. Throws CycleDetected.
std::vector<std::string> topological_order(const CausalSceneGraph& graph);

/// Edge indices forming one directed cycle among active edges, or empty.
/// The search is deterministic: roots by ascending id, edges in edge order.
std::vector<std::size_t> find_cycle(const CausalSceneGraph& graph);

/// Objects with no active edge touching them.
std::vector<std::string> isolated_nodes(const CausalSceneGraph& graph);

}  // namespace causalstruct
