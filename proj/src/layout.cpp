#include "causalstruct/layout.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <json.hpp>

#include "causalstruct/error.hpp"

namespace causalstruct {

bool Aabb::contains(const Aabb& inner, double tol) const {
  for (int k = 0; k < 3; ++k) {
    if (inner.min[k] < min[k] - tol || inner.max[k] > max[k] + tol) return false;
  }
  return true;
}

double aabb_overlap(const Aabb& a, const Aabb& b) {
  double volume = 1.0;
  for (int k = 0; k < 3; ++k) {
    double lo = std::max(a.min[k], b.min[k]);
    double hi = std::min(a.max[k], b.max[k]);
    if (hi <= lo) return 0.0;
    volume *= hi - lo;
  }
  return volume;
}

Vec3 PlacedObject::extent() const {
  return Vec3{dims.length_cm, dims.width_cm, dims.height_cm} * (kCentimetersToMeters * scale);
}

Aabb PlacedObject::aabb() const {
  auto h = half_extent();
  return {center - h, center + h};
}

const PlacedObject* LayoutScene::find(const std::string& id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

PlacedObject* LayoutScene::find(const std::string& id) {
  for (auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

const PlacedObject& LayoutScene::at(const std::string& id) const {
  if (auto* o = find(id)) return *o;
  fail(ErrorKind::UnknownObject, "object '" + id + "' is not placed");
}

PlacedObject& LayoutScene::at(const std::string& id) {
  if (auto* o = find(id)) return *o;
  fail(ErrorKind::UnknownObject, "object '" + id + "' is not placed");
}

std::size_t LayoutScene::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].id == id) return i;
  }
  fail(ErrorKind::UnknownObject, "object '" + id + "' is not placed");
}

Vec3 relation_offset(SpatialRelation rel, const Vec3& subject_extent, const Aabb& target,
                     const LayoutParams& params) {
  using R = SpatialRelation;
  const Vec3 h = subject_extent * 0.5;
  const Vec3 tc = target.center();
  const Vec3 ts = target.size();
  const double g = params.gap;
  const double top = target.max.z + h.z;

  const double left_x = target.min.x - g - h.x;
  const double right_x = target.max.x + g + h.x;
  const double front_y = target.max.y + g + h.y;
  const double back_y = target.min.y - g - h.y;

  switch (rel) {
    case R::on: return {tc.x, tc.y, top};
    case R::left_on: return {tc.x - ts.x / 4.0, tc.y, top};
    case R::right_on: return {tc.x + ts.x / 4.0, tc.y, top};
    case R::corner: return {target.min.x + h.x, target.min.y + h.y, top};
    case R::above: return {tc.x, tc.y, target.max.z + g + h.z};
    case R::under: {
      // Room beneath an elevated target: hang below it. Otherwise rest on the
      // ground tucked against the target's front face.
      if (target.min.z - subject_extent.z >= 0.0) return {tc.x, tc.y, target.min.z - h.z};
      return {tc.x, target.max.y + h.y, h.z};
    }
    case R::in: {
      if (params.strict_containment) {
        for (int k = 0; k < 3; ++k) {
          if (subject_extent[k] > ts[k] + 1e-12) {
            fail(ErrorKind::DoesNotFit, "subject does not fit inside the target");
          }
        }
      }
      return tc;
    }
    case R::left: return {left_x, tc.y, h.z};
    case R::right: return {right_x, tc.y, h.z};
    case R::front: return {tc.x, front_y, h.z};
    case R::behind: return {tc.x, back_y, h.z};
    case R::left_front: return {left_x, front_y, h.z};
    case R::right_front: return {right_x, front_y, h.z};
    case R::left_back: return {left_x, back_y, h.z};
    case R::right_back: return {right_x, back_y, h.z};
  }
  return tc;
}

std::map<std::string, std::size_t> anchor_edges(const CausalSceneGraph& graph) {
  std::map<std::string, std::size_t> anchors;
  auto better = [&](std::size_t a, std::size_t b) {
    const auto& ea = graph.edges[a];
    const auto& eb = graph.edges[b];
    if (ea.confidence() != eb.confidence()) return ea.confidence() > eb.confidence();
    return std::tie(ea.target, ea.relation) < std::tie(eb.target, eb.relation);
  };
  for (auto i : graph.active_edges()) {
    auto [it, inserted] = anchors.emplace(graph.edges[i].subject, i);
    if (!inserted && better(i, it->second)) it->second = i;
  }
  return anchors;
}

namespace {

PlacedObject make_placed(const SceneObject& o) {
  return {o.id, o.name, o.asset_ref, o.dims, o.position, o.scale};
}

Vec3 grid_slot(std::size_t index, std::size_t count, double spacing) {
  auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
  cols = std::max<std::size_t>(cols, 1);
  return {static_cast<double>(index % cols) * spacing, static_cast<double>(index / cols) * spacing,
          0.0};
}

}  // namespace

LayoutScene place_graph(const CausalSceneGraph& graph, const LayoutParams& params) {
  const auto order = topological_order(graph);
  const auto anchors = anchor_edges(graph);

  std::size_t root_count = 0;
  for (const auto& id : order) root_count += anchors.count(id) ? 0 : 1;

  LayoutScene scene;
  std::size_t root_index = 0;
  for (const auto& id : order) {
    auto placed = make_placed(graph.node(id));
    auto it = anchors.find(id);
    if (it == anchors.end()) {
      placed.center = grid_slot(root_index++, root_count, params.grid_spacing);
      placed.center.z = placed.half_extent().z;
    } else {
      const auto& edge = graph.edges[it->second];
      placed.center = relation_offset(edge.relation, placed.extent(), scene.at(edge.target).aabb(),
                                      params);
    }
    scene.objects.push_back(std::move(placed));
  }
  return scene;
}

LayoutScene place_objects(const CausalSceneGraph& graph, const LayoutScene& scene,
                          const std::set<std::string>& ids, const LayoutParams& params) {
  const auto order = topological_order(graph);
  const auto anchors = anchor_edges(graph);

  LayoutScene out;
  for (const auto& id : order) {
    const auto* previous = scene.find(id);
    if (!ids.count(id) && previous) {
      out.objects.push_back(*previous);
      continue;
    }
    auto placed = make_placed(graph.node(id));
    auto it = anchors.find(id);
    if (it != anchors.end()) {
      const auto& edge = graph.edges[it->second];
      placed.center = relation_offset(edge.relation, placed.extent(), out.at(edge.target).aabb(),
                                      params);
    } else if (previous) {
      placed.center = {previous->center.x, previous->center.y, placed.half_extent().z};
    } else {
      // First root slot along +x that is clear of everything already placed.
      for (std::size_t k = 0;; ++k) {
        placed.center = {static_cast<double>(k) * params.grid_spacing, 0.0,
                         placed.half_extent().z};
        auto box = placed.aabb();
        bool clear = std::none_of(scene.objects.begin(), scene.objects.end(), [&](const auto& o) {
          return aabb_overlap(box, o.aabb()) > kOverlapTolerance;
        });
        if (clear || k > 1000) break;
      }
    }
    out.objects.push_back(std::move(placed));
  }
  return out;
}

namespace {

// Walk the anchor chain upward from `from`; true when it reaches `to` having
// crossed at least one containment edge.
bool contained_via_chain(const CausalSceneGraph& graph,
                         const std::map<std::string, std::size_t>& anchors,
                         const std::string& from, const std::string& to) {
  bool crossed_in = false;
  std::string cur = from;
  for (std::size_t steps = 0; steps <= graph.nodes.size(); ++steps) {
    auto it = anchors.find(cur);
    if (it == anchors.end()) return false;
    const auto& edge = graph.edges[it->second];
    crossed_in = crossed_in || edge.relation == SpatialRelation::in;
    if (edge.target == to) return crossed_in;
    cur = edge.target;
  }
  return false;
}

}  // namespace

bool is_containment_pair(const CausalSceneGraph& graph, const std::string& a,
                         const std::string& b) {
  const auto anchors = anchor_edges(graph);
  return contained_via_chain(graph, anchors, a, b) || contained_via_chain(graph, anchors, b, a);
}

std::set<std::string> dependents_of(const CausalSceneGraph& graph, const std::string& id) {
  const auto anchors = anchor_edges(graph);
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& [subject, edge] : anchors) children[graph.edges[edge].target].push_back(subject);

  std::set<std::string> out;
  std::vector<std::string> frontier{id};
  while (!frontier.empty()) {
    auto cur = frontier.back();
    frontier.pop_back();
    for (const auto& child : children[cur]) {
      if (child != id && out.insert(child).second) frontier.push_back(child);
    }
  }
  return out;
}

void snap_contacts(LayoutScene& scene, const CausalSceneGraph& graph,
                   const std::set<std::string>* ids) {
  const auto anchors = anchor_edges(graph);
  for (auto& object : scene.objects) {
    if (ids && !ids->count(object.id)) continue;
    const double hz = object.half_extent().z;
    auto it = anchors.find(object.id);
    if (it == anchors.end()) {
      object.center.z = hz;
    } else {
      const auto& edge = graph.edges[it->second];
      const auto* target = scene.find(edge.target);
      if (target && is_support_relation(edge.relation)) {
        object.center.z = target->aabb().max.z + hz;
      } else if (is_ground_relation(edge.relation)) {
        object.center.z = hz;
      }
    }
    if (object.center.z - hz < 0.0) object.center.z = hz;
  }
}

ResolveReport resolve_overlaps(const LayoutScene& scene, const CausalSceneGraph& graph,
                               const LayoutParams& params,
                               const std::optional<std::set<std::string>>& movable) {
  (void)params;
  ResolveReport report{scene, true, 0, {}};
  auto& objects = report.scene.objects;
  const auto anchors = anchor_edges(graph);
  const std::set<std::string>* only = movable ? &*movable : nullptr;
  auto can_move = [&](const std::string& id) { return !only || only->count(id) != 0; };

  std::map<std::string, std::set<std::string>> subtree;
  for (const auto& o : objects) subtree[o.id] = dependents_of(graph, o.id);

  auto skip_pair = [&](const PlacedObject& a, const PlacedObject& b) {
    return contained_via_chain(graph, anchors, a.id, b.id) ||
           contained_via_chain(graph, anchors, b.id, a.id);
  };
  auto overlapping = [&](const PlacedObject& a, const PlacedObject& b) {
    return !skip_pair(a, b) && aabb_overlap(a.aabb(), b.aabb()) > kOverlapTolerance;
  };

  snap_contacts(report.scene, graph, only);

  for (int pass = 1; pass <= kMaxResolvePasses; ++pass) {
    bool moved = false;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      for (std::size_t j = i + 1; j < objects.size(); ++j) {
        if (!overlapping(objects[i], objects[j])) continue;

        // The later object moves, unless it is locked or an ancestor of the other.
        std::size_t mover = j;
        std::size_t other = i;
        if (!can_move(objects[mover].id) || subtree[objects[mover].id].count(objects[other].id)) {
          std::swap(mover, other);
        }
        if (!can_move(objects[mover].id) || subtree[objects[mover].id].count(objects[other].id)) {
          continue;
        }
        const auto& mover_deps = subtree[objects[mover].id];

        // Shifts along +-x and +-y that clear `other`; prefer the smallest one
        // that leaves the mover clear of every other box.
        const Aabb m = objects[mover].aabb();
        const Aabb o = objects[other].aabb();
        struct Shift {
          int axis;
          double delta;
        };
        std::vector<Shift> shifts;
        for (int k = 0; k < 2; ++k) {
          shifts.push_back({k, o.max[k] - m.min[k]});
          shifts.push_back({k, o.min[k] - m.max[k]});
        }
        std::stable_sort(shifts.begin(), shifts.end(), [](const Shift& a, const Shift& b) {
          return std::abs(a.delta) < std::abs(b.delta);
        });
        auto clear_after = [&](const Shift& s) {
          PlacedObject probe = objects[mover];
          probe.center[s.axis] += s.delta;
          for (const auto& q : objects) {
            if (q.id == probe.id || mover_deps.count(q.id)) continue;
            if (overlapping(probe, q)) return false;
          }
          return true;
        };
        Shift chosen = shifts.front();
        for (const auto& s : shifts) {
          if (clear_after(s)) {
            chosen = s;
            break;
          }
        }
        objects[mover].center[chosen.axis] += chosen.delta;
        for (auto& dep : objects) {
          if (mover_deps.count(dep.id)) dep.center[chosen.axis] += chosen.delta;
        }
        moved = true;
      }
    }
    snap_contacts(report.scene, graph, only);
    report.passes = pass;
    if (!moved) break;
  }

  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (std::size_t j = i + 1; j < objects.size(); ++j) {
      if (overlapping(objects[i], objects[j])) {
        report.resolved = false;
        report.diagnostic += objects[i].id + " overlaps " + objects[j].id + "; ";
      }
    }
  }
  return report;
}

CausalSceneGraph apply_layout(const CausalSceneGraph& graph, const LayoutScene& scene) {
  CausalSceneGraph out = graph;
  for (const auto& placed : scene.objects) {
    auto it = out.nodes.find(placed.id);
    if (it == out.nodes.end()) continue;
    it->second.position = placed.center;
    it->second.scale = placed.scale;
  }
  return out;
}

LayoutScene scene_from_graph(const CausalSceneGraph& graph) {
  LayoutScene scene;
  for (const auto& id : topological_order(graph)) scene.objects.push_back(make_placed(graph.node(id)));
  return scene;
}

std::vector<FSceneRecord> assemble_fscene(const LayoutScene& scene) {
  std::vector<FSceneRecord> records;
  records.reserve(scene.objects.size());
  for (const auto& o : scene.objects) {
    records.push_back({o.id, o.asset_ref, o.center.x, o.center.y, o.center.z, o.scale});
  }
  return records;
}

std::string encode_fscene(const std::vector<FSceneRecord>& records) {
  using ojson = nlohmann::ordered_json;
  ojson objects = ojson::array();
  for (const auto& r : records) {
    ojson row;
    row["id"] = r.id;
    row["asset_ref"] = r.asset_ref ? ojson(*r.asset_ref) : ojson(nullptr);
    row["x"] = r.x;
    row["y"] = r.y;
    row["z"] = r.z;
    row["s"] = r.s;
    objects.push_back(std::move(row));
  }
  ojson doc;
  doc["objects"] = std::move(objects);
  doc["meta"] = {{"version", kLayoutFormatVersion}};
  return doc.dump(2) + "\n";
}

std::vector<FSceneRecord> decode_fscene(const std::string& document) {
  std::vector<FSceneRecord> records;
  try {
    auto doc = nlohmann::json::parse(document);
    if (doc.at("meta").at("version").get<std::string>() != kLayoutFormatVersion) {
      fail(ErrorKind::DecodeError, "unsupported layout version");
    }
    for (const auto& row : doc.at("objects")) {
      FSceneRecord r;
      r.id = row.at("id").get<std::string>();
      if (!row.at("asset_ref").is_null()) r.asset_ref = row.at("asset_ref").get<std::string>();
      r.x = row.at("x").get<double>();
      r.y = row.at("y").get<double>();
      r.z = row.at("z").get<double>();
      r.s = row.at("s").get<double>();
      records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorKind::DecodeError, ex.what());
  }
  return records;
}

std::vector<std::string> plausibility_violations(const LayoutScene& scene,
                                                 const CausalSceneGraph& graph, double tol) {
  std::vector<std::string> out;
  const auto anchors = anchor_edges(graph);
  const auto& objects = scene.objects;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto box = objects[i].aabb();
    if (!std::isfinite(box.min.x + box.min.y + box.min.z + box.max.x + box.max.y + box.max.z)) {
      out.push_back(objects[i].id + " has a non-finite box");
    }
    if (box.min.z < -tol) out.push_back(objects[i].id + " is below the ground plane");
    for (std::size_t j = i + 1; j < objects.size(); ++j) {
      if (contained_via_chain(graph, anchors, objects[i].id, objects[j].id) ||
          contained_via_chain(graph, anchors, objects[j].id, objects[i].id)) {
        continue;
      }
      double v = aabb_overlap(box, objects[j].aabb());
      if (v > tol) {
        out.push_back(objects[i].id + " overlaps " + objects[j].id + " by " + std::to_string(v));
      }
    }
  }
  for (const auto& [subject, index] : anchors) {
    const auto& edge = graph.edges[index];
    if (!is_support_relation(edge.relation)) continue;
    const auto* s = scene.find(subject);
    const auto* t = scene.find(edge.target);
    if (!s || !t) continue;
    double err = std::abs(s->aabb().min.z - t->aabb().max.z);
    if (err > tol) {
      out.push_back(subject + " is not resting on " + edge.target + " (gap " +
                    std::to_string(err) + ")");
    }
  }
  return out;
}

}  // namespace causalstruct
