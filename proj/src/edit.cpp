#include "causalstruct/edit.hpp"

#include <algorithm>
#include <charconv>

#include "causalstruct/causal_order.hpp"
#include "causalstruct/grammar.hpp"

namespace causalstruct {

EditCommand EditCommand::add(std::string grammar) {
  EditCommand c;
  c.kind = Kind::Add;
  c.spec = std::move(grammar);
  return c;
}

EditCommand EditCommand::remove(std::string object) {
  EditCommand c;
  c.kind = Kind::Remove;
  c.object = std::move(object);
  return c;
}

EditCommand EditCommand::move(std::string object, SpatialRelation relation, std::string target) {
  EditCommand c;
  c.kind = Kind::Move;
  c.object = std::move(object);
  c.relation = relation;
  c.target = std::move(target);
  return c;
}

EditCommand EditCommand::rescale(std::string object, double factor) {
  if (!(factor > 0.0)) fail(ErrorKind::PreconditionViolation, "rescale factor must be positive");
  EditCommand c;
  c.kind = Kind::Rescale;
  c.object = std::move(object);
  c.factor = factor;
  return c;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    out.push_back(trim(text.substr(start, comma == text.npos ? text.npos : comma - start)));
    if (comma == text.npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

EditCommand EditCommand::parse(Kind kind, std::string_view argument) {
  switch (kind) {
    case Kind::Add:
      return add(std::string(argument));
    case Kind::Remove:
      return remove(trim(argument));
    case Kind::Move: {
      auto parts = split_commas(argument);
      if (parts.size() != 3) fail(ErrorKind::PreconditionViolation, "move expects ID,relation,TARGET");
      return move(parts[0], parse_relation(parts[1]), parts[2]);
    }
    case Kind::Rescale: {
      auto parts = split_commas(argument);
      double f = 0.0;
      if (parts.size() == 2) {
        auto [ptr, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), f);
        if (ec != std::errc() || ptr != parts[1].data() + parts[1].size()) f = 0.0;
      }
      if (parts.size() != 2 || !(f > 0.0)) {
        fail(ErrorKind::PreconditionViolation, "rescale expects ID,factor with factor > 0");
      }
      return rescale(parts[0], f);
    }
  }
  fail(ErrorKind::PreconditionViolation, "unknown edit kind");
}

namespace {

// Draft mirroring the graph's objects; relations come from the prompt when it
// is structured, so reference relations survive the edit.
SceneDraft draft_of(const CausalSceneGraph& graph) {
  if (is_scene_grammar(graph.prompt)) {
    auto draft = parse_scene_grammar(graph.prompt);
    auto ids = assign_ids(draft);
    for (std::size_t i = 0; i < draft.objects.size(); ++i) draft.objects[i].id = ids[i];
    return draft;
  }
  SceneDraft draft;
  for (const auto& [id, node] : graph.nodes) {
    draft.objects.push_back({node.name, id, node.dims, 1.0, node.asset_ref});
  }
  return draft;
}

bool prompt_is_structured(const CausalSceneGraph& graph) { return is_scene_grammar(graph.prompt); }

std::string lookup(const CausalSceneGraph& graph, const std::string& ref) {
  if (graph.contains(ref)) return ref;
  std::vector<std::string> hits;
  for (const auto& [id, node] : graph.nodes) {
    if (node.name == ref) hits.push_back(id);
  }
  if (hits.size() != 1) {
    fail(ErrorKind::UnknownObject,
         hits.empty() ? "unknown object '" + ref + "'" : "'" + ref + "' names several objects");
  }
  return hits.front();
}

void drop_relations(SceneDraft& draft, const std::function<bool(const std::string&, const std::string&)>& hit) {
  auto ids = assign_ids(draft);
  auto matches = [&](const SceneDraft::Relation& r) {
    return hit(resolve_object(draft, ids, r.subject), resolve_object(draft, ids, r.target));
  };
  std::erase_if(draft.relations, matches);
  std::erase_if(draft.truths, matches);
}

std::set<std::string> affected_by(const CausalSceneGraph& before, const CausalSceneGraph& after,
                                  std::set<std::string> seeds) {
  auto anchors_before = anchor_edges(before);
  auto anchors_after = anchor_edges(after);
  for (const auto& [id, _] : after.nodes) {
    auto b = anchors_before.find(id);
    auto a = anchors_after.find(id);
    bool had = b != anchors_before.end();
    bool has = a != anchors_after.end();
    if (had != has) {
      seeds.insert(id);
    } else if (had) {
      const auto& eb = before.edges[b->second];
      const auto& ea = after.edges[a->second];
      if (eb.target != ea.target || eb.relation != ea.relation) seeds.insert(id);
    }
  }
  std::set<std::string> out;
  for (const auto& id : seeds) {
    if (!after.contains(id)) continue;
    out.insert(id);
    for (const auto& d : dependents_of(after, id)) out.insert(d);
  }
  return out;
}

// Orders, scores and screens freshly added edges; other edges keep their state.
ScreenResult integrate_edges(const CausalSceneGraph& graph, const std::vector<std::size_t>& added,
                             const LayoutScene& scene, const Oracle& oracle,
                             const Renderer& renderer, const PipelineConfig& config,
                             const std::set<std::string>& new_objects) {
  auto g = orient_edges(graph, added, oracle);
  g = attach_priors(g, added, oracle);
  g = enforce_dag(g);
  validate(g);
  LayoutParams loose = config.layout;
  loose.strict_containment = false;
  auto preliminary = place_objects(g, scene, new_objects, loose);
  return screen_edges(g, added, preliminary, oracle, renderer, config);
}

PipelineResult finish(const CausalSceneGraph& graph, LayoutScene scene,
                      const std::set<std::string>& affected, const PipelineConfig& config,
                      const Renderer& renderer, std::vector<PidTrace> traces) {
  PipelineResult result;
  result.traces = std::move(traces);
  result.resolve = resolve_overlaps(scene, graph, config.layout, affected);
  result.scene = result.resolve.scene;
  result.graph = apply_layout(graph, result.scene);
  result.renders = render_all(result.scene, renderer);
  return result;
}

}  // namespace

EditResult apply_edit(const CausalSceneGraph& graph, const EditCommand& command,
                      const PipelineConfig& config, const Renderer& renderer,
                      const OracleFactory& oracle_factory) {
  validate(config);
  validate(graph);
  const auto scene = scene_from_graph(graph);
  const bool structured = prompt_is_structured(graph);
  auto draft = draft_of(graph);
  CausalSceneGraph g = graph;
  EditResult out;
  std::vector<PidTrace> traces;

  switch (command.kind) {
    case EditCommand::Kind::Add: {
      const auto base_objects = draft.objects.size();
      const auto base_relations = draft.relations.size();
      auto combined = parse_scene_grammar(format_scene_grammar(draft) + "\n" + command.spec);
      if (combined.objects.size() != base_objects + 1) {
        fail(ErrorKind::GrammarError, "add expects exactly one obj() statement");
      }
      auto ids = assign_ids(combined);
      const auto new_id = ids.back();
      const auto& obj = combined.objects.back();
      g.nodes.emplace(new_id, SceneObject{new_id, obj.name, obj.dims, {}, obj.scale, obj.asset_ref});
      std::vector<std::size_t> added;
      for (auto i = base_relations; i < combined.relations.size(); ++i) {
        const auto& r = combined.relations[i];
        CausalEdge e;
        e.subject = resolve_object(combined, ids, r.subject);
        e.relation = r.relation;
        e.target = resolve_object(combined, ids, r.target);
        added.push_back(g.edges.size());
        g.edges.push_back(std::move(e));
      }
      if (structured) g.prompt = format_scene_grammar(combined);
      auto oracle = oracle_factory(g.prompt);
      if (added.empty()) {
        g = complete_edges(g, *oracle);
        for (auto i = graph.edges.size(); i < g.edges.size(); ++i) added.push_back(i);
      }
      auto screened = integrate_edges(g, added, scene, *oracle, renderer, config, {new_id});
      g = std::move(screened.graph);
      out.affected = affected_by(graph, g, {new_id});
      auto placed = place_objects(g, scene, out.affected, config.layout);
      placed = refine_subjects(g, placed, &out.affected, *oracle, renderer, config.pid, traces);
      out.result = finish(g, std::move(placed), out.affected, config, renderer, std::move(traces));
      out.result.assessments = std::move(screened.assessments);
      out.result.interventions = std::move(screened.interventions);
      return out;
    }

    case EditCommand::Kind::Remove: {
      const auto id = lookup(graph, command.object);
      std::set<std::string> direct;
      for (const auto& [dep, edge] : anchor_edges(graph)) {
        if (graph.edges[edge].target == id) direct.insert(dep);
      }
      auto seeds = dependents_of(graph, id);
      g.nodes.erase(id);
      std::erase_if(g.edges, [&](const CausalEdge& e) { return e.subject == id || e.target == id; });
      if (structured) {
        drop_relations(draft, [&](const std::string& a, const std::string& b) { return a == id || b == id; });
        std::erase_if(draft.objects, [&](const SceneDraft::Object& o) { return o.id == id; });
        g.prompt = format_scene_grammar(draft);
      }
      auto oracle = oracle_factory(g.prompt);
      // Orphans without a remaining edge ask for a new support; failing that
      // they stay where they are and drop to the ground.
      std::vector<std::size_t> added;
      for (const auto& orphan : direct) {
        auto isolated = isolated_nodes(g);
        if (std::find(isolated.begin(), isolated.end(), orphan) == isolated.end()) continue;
        auto proposal = oracle->propose_support_edge(g.node(orphan), g);
        if (!proposal || !g.contains(proposal->subject) || !g.contains(proposal->target) ||
            proposal->subject == proposal->target) {
          continue;
        }
        proposal->status = EdgeStatus::Proposed;
        proposal->posterior.reset();
        added.push_back(g.edges.size());
        g.edges.push_back(*proposal);
      }
      std::vector<InterventionResult> interventions;
      std::vector<EdgeAssessment> assessments;
      if (!added.empty()) {
        auto screened = integrate_edges(g, added, scene, *oracle, renderer, config, {});
        g = std::move(screened.graph);
        assessments = std::move(screened.assessments);
        interventions = std::move(screened.interventions);
      }
      LayoutScene trimmed = scene;
      std::erase_if(trimmed.objects, [&](const PlacedObject& o) { return o.id == id; });
      CausalSceneGraph before = graph;
      before.nodes.erase(id);
      std::erase_if(before.edges, [&](const CausalEdge& e) { return e.subject == id || e.target == id; });
      out.affected = affected_by(before, g, seeds);
      auto placed = place_objects(g, trimmed, out.affected, config.layout);
      placed = refine_subjects(g, placed, &out.affected, *oracle, renderer, config.pid, traces);
      out.result = finish(g, std::move(placed), out.affected, config, renderer, std::move(traces));
      out.result.assessments = std::move(assessments);
      out.result.interventions = std::move(interventions);
      out.affected.insert(id);  // gone from the scene
      return out;
    }

    case EditCommand::Kind::Move: {
      const auto id = lookup(graph, command.object);
      const auto target = lookup(graph, command.target);
      if (id == target) fail(ErrorKind::PreconditionViolation, "cannot move an object relative to itself");
      const auto anchors = anchor_edges(graph);
      std::optional<std::string> old_target;
      if (auto it = anchors.find(id); it != anchors.end()) {
        old_target = graph.edges[it->second].target;
        g.edges[it->second].status = EdgeStatus::Removed;
      }
      for (auto& e : g.edges) {
        bool same_pair = (e.subject == id && e.target == target) || (e.subject == target && e.target == id);
        if (same_pair) e.status = EdgeStatus::Removed;
      }
      CausalEdge moved;
      moved.subject = id;
      moved.relation = command.relation;
      moved.target = target;
      moved.prior = 1.0;
      moved.posterior = 1.0;
      moved.status = EdgeStatus::Kept;
      g.edges.push_back(moved);
      g = enforce_dag(g);
      validate(g);
      if (structured) {
        drop_relations(draft, [&](const std::string& a, const std::string& b) {
          auto on_pair = [&](const std::string& other) {
            return (a == id && b == other) || (a == other && b == id);
          };
          return on_pair(target) || (old_target && on_pair(*old_target));
        });
        draft.truths.push_back({id, command.relation, target});
        g.prompt = format_scene_grammar(draft);
      }
      auto oracle = oracle_factory(g.prompt);
      out.affected = affected_by(graph, g, {id});
      auto placed = place_objects(g, scene, out.affected, config.layout);
      placed = refine_subjects(g, placed, &out.affected, *oracle, renderer, config.pid, traces);
      out.result = finish(g, std::move(placed), out.affected, config, renderer, std::move(traces));
      return out;
    }

    case EditCommand::Kind::Rescale: {
      const auto id = lookup(graph, command.object);
      g.node(id).scale *= command.factor;
      auto oracle = oracle_factory(g.prompt);
      out.affected = {id};
      for (const auto& d : dependents_of(g, id)) out.affected.insert(d);
      auto placed = place_objects(g, scene, {id}, config.layout);
      const auto anchors = anchor_edges(g);
      if (auto it = anchors.find(id); it != anchors.end()) {
        const auto& edge = g.edges[it->second];
        if (edge.status == EdgeStatus::Kept || edge.status == EdgeStatus::Modified) {
          auto controller =
              PidController::from(config.pid.scale, config.pid.epsilon, config.pid.max_iters);
          auto refined = optimize_attribute({id, AttributeKind::Scale, 0.0}, placed, g, edge,
                                            renderer, *oracle, controller);
          g.node(id).scale = refined.value;
          traces.push_back(std::move(refined.trace));
        }
      }
      placed = place_objects(g, placed, out.affected, config.layout);
      out.result = finish(g, std::move(placed), out.affected, config, renderer, std::move(traces));
      return out;
    }
  }
  fail(ErrorKind::PreconditionViolation, "unknown edit kind");
}

}  // namespace causalstruct
