#include "causalstruct/pipeline.hpp"

#include <algorithm>

#include "causalstruct/causal_order.hpp"
#include "causalstruct/grammar.hpp"
#include "causalstruct/remote_oracle.hpp"
#include "causalstruct/scene_io.hpp"

namespace causalstruct {

namespace {

template <typename F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

void snapshot(const PipelineConfig& config, const std::string& name, const CausalSceneGraph& g) {
  if (config.output_dir.empty()) return;
  save_scene(g, config.output_dir / ("graph." + name + ".json"));
}

std::vector<std::size_t> all_active(const CausalSceneGraph& graph) { return graph.active_edges(); }

LayoutParams loose(const LayoutParams& params) {
  LayoutParams out = params;
  out.strict_containment = false;
  return out;
}

}  // namespace

GroundTruth ground_truth_from_prompt(const std::string& prompt, const LayoutParams& params) {
  return ground_truth_from_graph(reference_graph(parse_scene_grammar(prompt)), params);
}

std::unique_ptr<Oracle> make_oracle(const PipelineConfig& config, const std::string& prompt,
                                    std::shared_ptr<const ChatTransport> transport) {
  if (config.oracle.backend == OracleBackend::Deterministic) {
    return std::make_unique<DeterministicOracle>(ground_truth_from_prompt(prompt, config.layout),
                                                 config.seed);
  }
  if (!transport) transport = HttpTransport::from_environment(config.oracle.remote);
  std::optional<ResponseCache> cache;
  if (config.oracle.cache_mode != CacheMode::Off) {
    cache.emplace(config.oracle.cache_dir, config.oracle.cache_mode);
  }
  return std::make_unique<RemoteOracle>(config.oracle.remote, std::move(transport), std::move(cache),
                                        config.seed, prompt);
}

OracleFactory default_oracle_factory(const PipelineConfig& config,
                                     std::shared_ptr<const ChatTransport> transport) {
  return [config, transport](const std::string& prompt) {
    return make_oracle(config, prompt, transport);
  };
}

CausalSceneGraph build_initial_graph(const std::string& prompt, const Oracle& oracle) {
  if (prompt.find_first_not_of(" \t\r\n") == std::string::npos) {
    fail(ErrorKind::GrammarError, "empty prompt");
  }
  SceneDraft draft;
  if (is_scene_grammar(prompt)) {
    draft = parse_scene_grammar(prompt);
  } else if (const auto* remote = dynamic_cast<const RemoteOracle*>(&oracle)) {
    draft = remote->describe_scene(prompt);
  } else {
    parse_scene_grammar(prompt);  // rethrows the grammar error
  }
  auto graph = materialize_graph(draft, prompt);
  validate(graph);
  return graph;
}

CausalSceneGraph orient_edges(const CausalSceneGraph& graph, const std::vector<std::size_t>& edges,
                              const Oracle& oracle) {
  CausalSceneGraph out = graph;
  for (auto i : edges) {
    if (!out.edges[i].active()) continue;
    out.edges[i] = order_edge(apply_size_rule(out.edges[i], graph), graph, oracle);
  }
  return out;
}

CausalSceneGraph attach_priors(const CausalSceneGraph& graph, const std::vector<std::size_t>& edges,
                               const Oracle& oracle) {
  CausalSceneGraph out = graph;
  for (auto i : edges) {
    if (!out.edges[i].active()) continue;
    out.edges[i].prior = oracle.query_edge_prior(EdgeQuery::from(out, out.edges[i]));
  }
  return out;
}

ScreenResult screen_edges(const CausalSceneGraph& graph, const std::vector<std::size_t>& edges,
                          const LayoutScene& scene, const Oracle& oracle, const Renderer& renderer,
                          const PipelineConfig& config) {
  ScreenResult out{graph, {}, {}};
  const auto active = graph.active_edges();
  std::vector<double> fractions;
  for (auto i : active) {
    fractions.push_back(oracle.query_edge_trials(EdgeQuery::from(graph, graph.edges[i]), config.trials));
  }
  const double likelihood = order_likelihood(fractions);

  InterventionMap interventions;
  for (auto i : edges) {
    auto pos = std::find(active.begin(), active.end(), i);
    if (pos == active.end()) continue;
    EdgeAssessment a;
    a.edge = graph.edges[i];
    a.prior = a.edge.prior;
    a.likelihood = likelihood;
    a.posterior = edge_posterior(a.prior, fractions, static_cast<std::size_t>(pos - active.begin()));
    a.decision = a.posterior > config.thresholds.tau1 ? EdgeDecision::Keep : EdgeDecision::Intervene;
    if (a.decision == EdgeDecision::Intervene) {
      auto result = intervene_edge(a.edge, graph, scene, renderer, oracle, config.trials,
                                   loose(config.layout));
      interventions[{a.edge.subject, a.edge.target}] = {result.s_star, result.s_star_posterior};
      out.interventions.push_back(std::move(result));
    }
    out.assessments.push_back(std::move(a));
  }
  out.graph = update_strategy(graph, out.assessments, config.thresholds, interventions);
  for (auto& a : out.assessments) {
    auto idx = out.graph.find_edge(a.edge.subject, a.edge.target);
    if (!idx) a.decision = EdgeDecision::Remove;
  }
  return out;
}

LayoutScene refine_subjects(const CausalSceneGraph& graph, const LayoutScene& scene,
                            const std::set<std::string>* subjects, const Oracle& oracle,
                            const Renderer& renderer, const PidSettings& settings,
                            std::vector<PidTrace>& traces) {
  LayoutScene out = scene;
  for (const auto& id : topological_order(graph)) {
    if (subjects && !subjects->count(id)) continue;
    for (auto i : graph.active_edges()) {
      const auto& e = graph.edges[i];
      if (e.subject != id) continue;
      if (e.status != EdgeStatus::Kept && e.status != EdgeStatus::Modified) continue;
      auto refined = refine_edge_attributes(e, graph, out, renderer, oracle, settings);
      out = std::move(refined.scene);
      for (auto& t : refined.traces) traces.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<RenderedView> render_all(const LayoutScene& scene, const Renderer& renderer) {
  std::vector<RenderedView> out;
  for (auto v : {Viewpoint::Front, Viewpoint::Side, Viewpoint::Top, Viewpoint::ThreeQuarter}) {
    out.push_back(renderer.render(scene, v));
  }
  return out;
}

PipelineResult refine_graph(const PipelineConfig& config, const CausalSceneGraph& initial,
                            const Oracle& oracle, const Renderer& renderer) {
  validate(config);
  PipelineResult result;

  auto graph = stage("order", [&] { return orient_edges(initial, all_active(initial), oracle); });
  snapshot(config, "ordered", graph);

  graph = stage("complete", [&] {
    auto completed = complete_edges(graph, oracle);
    std::vector<std::size_t> added;
    for (auto i = graph.edges.size(); i < completed.edges.size(); ++i) added.push_back(i);
    return orient_edges(completed, added, oracle);
  });
  snapshot(config, "completed", graph);

  graph = stage("prior", [&] { return attach_priors(graph, all_active(graph), oracle); });
  graph = stage("dag", [&] {
    auto dag = enforce_dag(graph);
    validate(dag);
    return dag;
  });
  snapshot(config, "dag", graph);

  auto screened = stage("bayes", [&] {
    auto preliminary = place_graph(graph, loose(config.layout));
    return screen_edges(graph, all_active(graph), preliminary, oracle, renderer, config);
  });
  graph = std::move(screened.graph);
  result.assessments = std::move(screened.assessments);
  result.interventions = std::move(screened.interventions);
  snapshot(config, "updated", graph);

  auto scene = stage("layout", [&] { return place_graph(graph, config.layout); });
  scene = stage("pid", [&] {
    return refine_subjects(graph, scene, nullptr, oracle, renderer, config.pid, result.traces);
  });
  result.resolve = stage("resolve", [&] { return resolve_overlaps(scene, graph, config.layout); });
  result.scene = result.resolve.scene;
  result.graph = apply_layout(graph, result.scene);
  result.renders = stage("render", [&] { return render_all(result.scene, renderer); });
  if (!config.output_dir.empty()) {
    stage("export", [&] {
      write_artifacts(result, config.output_dir);
      return 0;
    });
  }
  return result;
}

PipelineResult run_pipeline(const PipelineConfig& config, const std::string& prompt,
                            const Oracle& oracle, const Renderer& renderer) {
  validate(config);
  auto graph = stage("build", [&] { return build_initial_graph(prompt, oracle); });
  snapshot(config, "initial", graph);
  return refine_graph(config, graph, oracle, renderer);
}

PipelineResult layout_graph(const PipelineConfig& config, const CausalSceneGraph& graph,
                            const Renderer& renderer) {
  PipelineResult result;
  auto scene = stage("layout", [&] {
    validate(graph);
    return place_graph(graph, config.layout);
  });
  result.resolve = stage("resolve", [&] { return resolve_overlaps(scene, graph, config.layout); });
  result.scene = result.resolve.scene;
  result.graph = apply_layout(graph, result.scene);
  result.renders = stage("render", [&] { return render_all(result.scene, renderer); });
  if (!config.output_dir.empty()) write_artifacts(result, config.output_dir);
  return result;
}

void write_artifacts(const PipelineResult& result, const std::filesystem::path& dir) {
  save_scene(result.graph, dir / "scene.json");
  write_text_file(dir / "fscene.json", encode_fscene(assemble_fscene(result.scene)));
  for (const auto& view : result.renders) {
    write_text_file(dir / "renders" / (std::string(to_string(view.viewpoint)) + ".svg"),
                    view.document);
  }
  std::string trace;
  for (const auto& t : result.traces) trace += format_trace(t) + "\n";
  write_text_file(dir / "pid_trace.txt", trace);
}

}  // namespace causalstruct
