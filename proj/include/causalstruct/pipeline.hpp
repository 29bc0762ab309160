#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "causalstruct/bayes_edge.hpp"
#include "causalstruct/config.hpp"
#include "causalstruct/error.hpp"
#include "causalstruct/intervention.hpp"
#include "causalstruct/layout.hpp"
#include "causalstruct/oracle.hpp"
#include "causalstruct/pid.hpp"
#include "causalstruct/render.hpp"

namespace causalstruct {

/// An error tagged with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), stage + ": " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineResult {
  CausalSceneGraph graph;  // final graph, nodes carry placed centers and scales
  LayoutScene scene;
  std::vector<RenderedView> renders;
  std::vector<EdgeAssessment> assessments;
  std::vector<InterventionResult> interventions;
  std::vector<PidTrace> traces;
  ResolveReport resolve;
};

using OracleFactory = std::function<std::unique_ptr<Oracle>(const std::string& prompt)>;

/// Rule-based ground truth for a structured prompt. Throws GrammarError.
GroundTruth ground_truth_from_prompt(const std::string& prompt, const LayoutParams& params = {});

/// Backend per config. The rule-based backend reads its truth from the
/// prompt grammar; the remote backend uses `transport` or HTTP.
std::unique_ptr<Oracle> make_oracle(const PipelineConfig& config, const std::string& prompt,
                                    std::shared_ptr<const ChatTransport> transport = nullptr);

OracleFactory default_oracle_factory(const PipelineConfig& config,
                                     std::shared_ptr<const ChatTransport> transport = nullptr);

/// Structured prompts parse directly; free text goes through a remote oracle.
CausalSceneGraph build_initial_graph(const std::string& prompt, const Oracle& oracle);

/// Size rule then causal order for the listed edges.
CausalSceneGraph orient_edges(const CausalSceneGraph& graph, const std::vector<std::size_t>& edges,
                              const Oracle& oracle);

/// Oracle priors for the listed edges.
CausalSceneGraph attach_priors(const CausalSceneGraph& graph, const std::vector<std::size_t>& edges,
                               const Oracle& oracle);

struct ScreenResult {
  CausalSceneGraph graph;
  std::vector<EdgeAssessment> assessments;
  std::vector<InterventionResult> interventions;
};

/// Posteriors for the listed edges with every active edge as evidence,
/// interventions on the low-confidence ones against `scene`, then the update.
ScreenResult screen_edges(const CausalSceneGraph& graph, const std::vector<std::size_t>& edges,
                          const LayoutScene& scene, const Oracle& oracle, const Renderer& renderer,
                          const PipelineConfig& config);

/// PID refinement of every kept or modified edge whose subject is in
/// `subjects` (all when null), subjects in topological order.
LayoutScene refine_subjects(const CausalSceneGraph& graph, const LayoutScene& scene,
                            const std::set<std::string>* subjects, const Oracle& oracle,
                            const Renderer& renderer, const PidSettings& settings,
                            std::vector<PidTrace>& traces);

/// Whole pipeline from a prompt. Stage snapshots go to config.output_dir when set.
PipelineResult run_pipeline(const PipelineConfig& config, const std::string& prompt,
                            const Oracle& oracle, const Renderer& renderer);

/// Pipeline from an existing graph: every stage after graph construction.
PipelineResult refine_graph(const PipelineConfig& config, const CausalSceneGraph& graph,
                            const Oracle& oracle, const Renderer& renderer);

/// Placement, overlap resolution and renders only; no oracle.
PipelineResult layout_graph(const PipelineConfig& config, const CausalSceneGraph& graph,
                            const Renderer& renderer);

std::vector<RenderedView> render_all(const LayoutScene& scene, const Renderer& renderer);

/// scene.json, fscene.json, renders/<view>.svg and pid_trace.txt under `dir`.
void write_artifacts(const PipelineResult& result, const std::filesystem::path& dir);

}  // namespace causalstruct
