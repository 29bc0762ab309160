#pragma once

#include <functional>
#include <string>
#include <vector>

#include "causalstruct/error.hpp"
#include "causalstruct/graph.hpp"
#include "causalstruct/layout.hpp"
#include "causalstruct/oracle.hpp"
#include "causalstruct/render.hpp"

namespace causalstruct {

struct PidGains {
  double kp = 1.0;
  double ki = 1e-5;
  double kd = 5.0;
  double delta_max = 0.02;
  double gamma = 500.0;
};

inline constexpr PidGains kScaleGains{1.0, 1e-5, 5.0, 0.02, 500.0};
inline constexpr PidGains kPositionGains{1.0, 1e-5, 5.0, 0.4, 800.0};
inline constexpr double kDefaultScoreTolerance = 5.0;
inline constexpr int kDefaultMaxIterations = 20;

struct PidController {
  double kp = 1.0;
  double ki = 0.0;
  double kd = 0.0;
  double integral = 0.0;
  double prev_error = 0.0;
  double delta_max = 0.02;
  double gamma = 500.0;
  double epsilon = kDefaultScoreTolerance;
  int max_iters = kDefaultMaxIterations;

  static PidController from(const PidGains& gains, double epsilon = kDefaultScoreTolerance,
                            int max_iters = kDefaultMaxIterations);
};

void validate(const PidController& controller);

/// Discrete PID step. Accumulates e, differences against the previous error
/// and stores e for the next call. Returns u.
double pid_signal(PidController& controller, double error);

/// Bounded actuator delta * tanh(u / gamma), kept strictly inside (-delta, delta).
double actuate(double u, double delta_max, double gamma);
inline double actuate(double u, const PidController& c) { return actuate(u, c.delta_max, c.gamma); }

enum class AttributeKind { Scale, PositionX, PositionY, PositionZ };

std::string_view to_string(AttributeKind kind);

struct AttributeTarget {
  std::string object_id;
  AttributeKind kind = AttributeKind::Scale;
  double target_score = 0.0;
};

struct PidTraceRow {
  int iteration = 0;
  double score = 0.0;
  double error = 0.0;
  double integral = 0.0;
  double derivative = 0.0;
  double u = 0.0;
  double step = 0.0;   // actuator output
  double value = 0.0;  // attribute after the step
};

struct PidTrace {
  AttributeTarget target;
  std::vector<PidTraceRow> rows;
  bool converged = false;
};

/// Raised when scoring fails mid-loop; carries the rows completed so far.
class PidAbort : public Error {
 public:
  PidAbort(ErrorKind kind, const std::string& message, PidTrace partial)
      : Error(kind, message), partial_(std::move(partial)) {}
  const PidTrace& partial() const { return partial_; }

 private:
  PidTrace partial_;
};

/// The render-score-adjust loop over a scalar attribute. `score` evaluates the
/// current value; `apply` returns the value after a step. Each iteration
/// applies its step before the stop test (|e| <= epsilon or N iterations).
PidTrace run_pid_loop(PidController controller, double& value,
                      const std::function<double(double)>& score,
                      const std::function<double(double, double)>& apply,
                      double target_score = 0.0);

/// Scale steps are relative (s * (1 + step)); position steps add meters.
double apply_step(AttributeKind kind, double value, double step);

struct AttributeResult {
  LayoutScene scene;
  double value = 0.0;
  PidTrace trace;
};

AttributeResult optimize_attribute(const AttributeTarget& target, const LayoutScene& scene,
                                   const CausalSceneGraph& graph, const CausalEdge& edge,
                                   const Renderer& renderer, const Oracle& oracle,
                                   const PidController& controller);

struct PidSettings {
  PidGains scale = kScaleGains;
  PidGains position = kPositionGains;
  double epsilon = kDefaultScoreTolerance;
  int max_iters = kDefaultMaxIterations;
};

struct RefineResult {
  LayoutScene scene;
  std::vector<PidTrace> traces;
};

/// Scale first, then X, Y, Z of the edge's subject, each with a fresh controller.
RefineResult refine_edge_attributes(const CausalEdge& edge, const CausalSceneGraph& graph,
                                    const LayoutScene& scene, const Renderer& renderer,
                                    const Oracle& oracle, const PidSettings& settings = {});

/// Plain-text table: iteration, score, e, E, d, u, step, value.
std::string format_trace(const PidTrace& trace);

}  // namespace causalstruct
