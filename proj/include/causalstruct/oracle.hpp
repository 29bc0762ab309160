#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "causalstruct/graph.hpp"
#include "causalstruct/layout.hpp"
#include "causalstruct/render.hpp"

namespace causalstruct {

/// Independent confidences that the first object depends on the second
/// (c_ij) and the reverse (c_ji). They need not sum to one.
struct PrecedenceEstimate {
  double c_ij = 0.5;
  double c_ji = 0.5;
};

enum class JudgmentAction { Keep, Modify };

struct InterventionJudgment {
  JudgmentAction action = JudgmentAction::Keep;
  std::optional<SpatialRelation> updated_relation;  // set iff action == Modify

  static InterventionJudgment keep() { return {}; }
  static InterventionJudgment modify(SpatialRelation rel) { return {JudgmentAction::Modify, rel}; }
  friend bool operator==(const InterventionJudgment&, const InterventionJudgment&) = default;
};

inline constexpr int kScoreLimit = 100;

struct AxisScores {
  int x = 0;
  int y = 0;
  int z = 0;

  int operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  friend bool operator==(const AxisScores&, const AxisScores&) = default;
};

/// Rounds and clamps a raw score into [-100, 100].
int clamp_score(double raw);

/// An edge together with both endpoint objects, which is what every
/// edge-level query needs (names for prompts, ids for lookups).
struct EdgeQuery {
  CausalEdge edge;
  SceneObject subject;
  SceneObject target;

  static EdgeQuery from(const CausalSceneGraph& graph, const CausalEdge& edge);
};

/// The evaluator boundary. Implementations are read-only services and may be
/// queried concurrently.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual PrecedenceEstimate query_precedence(const SceneObject& a, const SceneObject& b) const = 0;
  virtual double query_edge_prior(const EdgeQuery& query) const = 0;
  /// Fraction of `trials` independent queries affirming the edge.
  virtual double query_edge_trials(const EdgeQuery& query, int trials) const = 0;
  virtual InterventionJudgment query_intervention_judgment(const EdgeQuery& query,
                                                           const RenderedView& view,
                                                           int trial) const = 0;
  virtual int query_scale_score(const EdgeQuery& query, const RenderedView& view,
                                const LayoutScene& scene) const = 0;
  virtual AxisScores query_position_scores(const EdgeQuery& query, const RenderedView& view,
                                           const LayoutScene& scene) const = 0;
  /// One edge connecting an isolated object to the rest of the graph.
  virtual std::optional<CausalEdge> propose_support_edge(const SceneObject& isolated,
                                                         const CausalSceneGraph& graph) const = 0;
};

/// Reference answers for the rule-based backend.
struct GroundTruth {
  std::map<std::pair<std::string, std::string>, SpatialRelation> true_relations;
  std::map<std::string, double> true_scales;
  std::map<std::string, Vec3> true_positions;
  std::map<std::string, Vec3> reference_extent;

  std::optional<SpatialRelation> relation(const std::string& subject,
                                          const std::string& target) const;
  /// True when `from` reaches `to` through a chain of true relations.
  bool depends_on(const std::string& from, const std::string& to) const;
};

/// Ground truth for a reference graph: its active edges are the true
/// relations, its scales the true scales, and its own placement supplies the
/// true positions and reference extents.
GroundTruth ground_truth_from_graph(const CausalSceneGraph& reference,
                                    const LayoutParams& params = {});

/// Answers every query from a GroundTruth table. Pure: identical inputs give
/// identical outputs, independent of the rendered view.
class DeterministicOracle final : public Oracle {
 public:
  static constexpr double kConfident = 0.9;
  static constexpr double kDoubtful = 0.1;
  static constexpr double kUnknown = 0.5;
  static constexpr double kPriorMatch = 0.9;
  static constexpr double kPriorOtherRelation = 0.5;
  static constexpr double kPriorAbsent = 0.2;

  explicit DeterministicOracle(GroundTruth truth, std::uint64_t seed = 0)
      : truth_(std::move(truth)), seed_(seed) {}

  const GroundTruth& truth() const { return truth_; }
  std::uint64_t seed() const { return seed_; }

  PrecedenceEstimate query_precedence(const SceneObject& a, const SceneObject& b) const override;
  double query_edge_prior(const EdgeQuery& query) const override;
  double query_edge_trials(const EdgeQuery& query, int trials) const override;
  InterventionJudgment query_intervention_judgment(const EdgeQuery& query,
                                                   const RenderedView& view,
                                                   int trial) const override;
  int query_scale_score(const EdgeQuery& query, const RenderedView& view,
                        const LayoutScene& scene) const override;
  AxisScores query_position_scores(const EdgeQuery& query, const RenderedView& view,
                                   const LayoutScene& scene) const override;
  std::optional<CausalEdge> propose_support_edge(const SceneObject& isolated,
                                                 const CausalSceneGraph& graph) const override;

 private:
  GroundTruth truth_;
  std::uint64_t seed_;
};

}  // namespace causalstruct
