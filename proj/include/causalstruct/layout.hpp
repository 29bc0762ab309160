#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causalstruct/graph.hpp"

namespace causalstruct {

struct Aabb {
  Vec3 min;
  Vec3 max;

  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 size() const { return max - min; }
  bool contains(const Aabb& inner, double tol = 1e-9) const;
};

/// Intersection volume in m^3; zero for disjoint or touching boxes.
double aabb_overlap(const Aabb& a, const Aabb& b);

struct PlacedObject {
  std::string id;
  std::string name;
  std::optional<std::string> asset_ref;
  Dimensions dims;
  Vec3 center;
  double scale = 1.0;

  Vec3 extent() const;
  Vec3 half_extent() const { return extent() * 0.5; }
  Aabb aabb() const;
};

/// Placed scene. Objects are kept in placement (topological) order; the
/// ground plane is z = 0.
struct LayoutScene {
  std::vector<PlacedObject> objects;

  const PlacedObject* find(const std::string& id) const;
  PlacedObject* find(const std::string& id);
  const PlacedObject& at(const std::string& id) const;
  PlacedObject& at(const std::string& id);
  std::size_t index_of(const std::string& id) const;
};

struct LayoutParams {
  double gap = 0.05;           // clearance for non-contact relations, meters
  double grid_spacing = 1.5;   // root grid pitch, meters
  bool strict_containment = true;
};

/// Center of a subject with the given scaled extent placed per `rel` against
/// an already placed target. Axis convention: +x right, +y front, +z up.
/// Throws DoesNotFit for `in` when the subject cannot fit and containment is strict.
Vec3 relation_offset(SpatialRelation rel, const Vec3& subject_extent, const Aabb& target,
                     const LayoutParams& params = {});

/// Placement anchor per dependent object: the active edge with the highest
/// confidence; ties go to the smaller target id, then vocabulary order.
std::map<std::string, std::size_t> anchor_edges(const CausalSceneGraph& graph);

LayoutScene place_graph(const CausalSceneGraph& graph, const LayoutParams& params = {});

/// Re-place `ids` (and nothing else) against their anchors in `scene`.
/// Objects without an anchor keep their footprint and drop to the ground, or
/// take the first free root slot when they are not in the scene yet.
LayoutScene place_objects(const CausalSceneGraph& graph, const LayoutScene& scene,
                          const std::set<std::string>& ids, const LayoutParams& params = {});

/// True when one object's anchor chain reaches the other through an `in` edge.
bool is_containment_pair(const CausalSceneGraph& graph, const std::string& a,
                         const std::string& b);

struct ResolveReport {
  LayoutScene scene;
  bool resolved = true;
  int passes = 0;
  std::string diagnostic;
};

inline constexpr double kOverlapTolerance = 1e-6;  // m^3
inline constexpr int kMaxResolvePasses = 50;

/// Re-snaps contact faces, then separates interpenetrating unrelated pairs by
/// sliding the later-placed object (with its dependents) along the horizontal
/// axis of least penetration. When `movable` is given only those objects move.
ResolveReport resolve_overlaps(const LayoutScene& scene, const CausalSceneGraph& graph,
                               const LayoutParams& params = {},
                               const std::optional<std::set<std::string>>& movable = std::nullopt);

/// Re-snap contact faces and the ground plane for `ids` in placement order.
void snap_contacts(LayoutScene& scene, const CausalSceneGraph& graph,
                   const std::set<std::string>* ids = nullptr);

/// Anchor-descendants of `id` (not including it).
std::set<std::string> dependents_of(const CausalSceneGraph& graph, const std::string& id);

/// Copies placed centers and scales back onto the graph nodes.
CausalSceneGraph apply_layout(const CausalSceneGraph& graph, const LayoutScene& scene);

/// Rebuilds a scene from the positions stored on graph nodes, in topological order.
LayoutScene scene_from_graph(const CausalSceneGraph& graph);

// Structured layout record: asset reference, center and scale per object.
struct FSceneRecord {
  std::string id;
  std::optional<std::string> asset_ref;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double s = 1.0;

  friend bool operator==(const FSceneRecord&, const FSceneRecord&) = default;
};

inline constexpr std::string_view kLayoutFormatVersion = "causalstruct-layout/1";

std::vector<FSceneRecord> assemble_fscene(const LayoutScene& scene);
std::string encode_fscene(const std::vector<FSceneRecord>& records);
std::vector<FSceneRecord> decode_fscene(const std::string& document);

/// Checks of the physical plausibility invariants; empty when all hold.
std::vector<std::string> plausibility_violations(const LayoutScene& scene,
                                                 const CausalSceneGraph& graph,
                                                 double tol = 1e-6);

}  // namespace causalstruct
