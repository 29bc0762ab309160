#include "causalstruct/pid.hpp"

#include <cmath>

#include <fmt/format.h>

namespace causalstruct {

PidController PidController::from(const PidGains& gains, double epsilon, int max_iters) {
  PidController c;
  c.kp = gains.kp;
  c.ki = gains.ki;
  c.kd = gains.kd;
  c.delta_max = gains.delta_max;
  c.gamma = gains.gamma;
  c.epsilon = epsilon;
  c.max_iters = max_iters;
  return c;
}

void validate(const PidController& c) {
  if (!(c.delta_max > 0.0) || !(c.gamma > 0.0)) {
    fail(ErrorKind::ConfigError, "PID actuator bounds must be positive");
  }
  if (c.max_iters < 1) fail(ErrorKind::ConfigError, "PID iteration limit must be at least 1");
  if (!(c.epsilon >= 0.0)) fail(ErrorKind::ConfigError, "PID tolerance must be non-negative");
}

double pid_signal(PidController& c, double error) {
  c.integral += error;
  const double derivative = error - c.prev_error;
  const double u = c.kp * error + c.ki * c.integral + c.kd * derivative;
  c.prev_error = error;
  return u;
}

double actuate(double u, double delta_max, double gamma) {
  // tanh rounds to exactly 1 for large arguments, so cap just below delta.
  const double step = delta_max * std::tanh(u / gamma);
  const double bound = std::nextafter(delta_max, 0.0);
  return std::abs(step) > bound ? std::copysign(bound, step) : step;
}

std::string_view to_string(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::Scale: return "scale";
    case AttributeKind::PositionX: return "x";
    case AttributeKind::PositionY: return "y";
    case AttributeKind::PositionZ: return "z";
  }
  return "?";
}

PidTrace run_pid_loop(PidController c, double& value, const std::function<double(double)>& score,
                      const std::function<double(double, double)>& apply, double target_score) {
  validate(c);
  PidTrace trace;
  for (int iter = 1; iter <= c.max_iters; ++iter) {
    PidTraceRow row;
    row.iteration = iter;
    try {
      row.score = score(value);
    } catch (const Error& e) {
      throw PidAbort(e.kind(), e.what(), trace);
    }
    row.error = target_score - row.score;
    const double prev = c.prev_error;
    row.u = pid_signal(c, row.error);
    row.integral = c.integral;
    row.derivative = row.error - prev;
    row.step = actuate(row.u, c);
    value = apply(value, row.step);
    row.value = value;
    trace.rows.push_back(row);
    if (std::abs(row.error) <= c.epsilon) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

double apply_step(AttributeKind kind, double value, double step) {
  return kind == AttributeKind::Scale ? value * (1.0 + step) : value + step;
}

namespace {

Viewpoint scoring_view(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::Scale: return Viewpoint::ThreeQuarter;
    case AttributeKind::PositionY: return Viewpoint::Side;
    default: return Viewpoint::Front;
  }
}

double& attribute_of(PlacedObject& object, AttributeKind kind) {
  switch (kind) {
    case AttributeKind::Scale: return object.scale;
    case AttributeKind::PositionX: return object.center.x;
    case AttributeKind::PositionY: return object.center.y;
    case AttributeKind::PositionZ: return object.center.z;
  }
  return object.scale;
}

}  // namespace

AttributeResult optimize_attribute(const AttributeTarget& target, const LayoutScene& scene,
                                   const CausalSceneGraph& graph, const CausalEdge& edge,
                                   const Renderer& renderer, const Oracle& oracle,
                                   const PidController& controller) {
  if (!scene.find(target.object_id)) {
    fail(ErrorKind::PreconditionViolation, "PID target '" + target.object_id + "' is not placed");
  }
  AttributeResult out{scene, 0.0, {}};
  const auto query = EdgeQuery::from(graph, edge);
  const auto view = scoring_view(target.kind);
  const auto kind = target.kind;

  double value = attribute_of(out.scene.at(target.object_id), kind);
  auto score = [&](double v) -> double {
    attribute_of(out.scene.at(target.object_id), kind) = v;
    const auto rendered = renderer.render(out.scene, view);
    if (kind == AttributeKind::Scale) return oracle.query_scale_score(query, rendered, out.scene);
    const auto axes = oracle.query_position_scores(query, rendered, out.scene);
    return axes[static_cast<int>(kind) - 1];
  };
  auto apply = [kind](double v, double step) { return apply_step(kind, v, step); };

  try {
    out.trace = run_pid_loop(controller, value, score, apply, target.target_score);
  } catch (PidAbort& abort) {
    PidTrace partial = abort.partial();
    partial.target = target;
    throw PidAbort(abort.kind(), abort.what(), std::move(partial));
  }
  out.trace.target = target;
  attribute_of(out.scene.at(target.object_id), kind) = value;
  out.value = value;
  return out;
}

RefineResult refine_edge_attributes(const CausalEdge& edge, const CausalSceneGraph& graph,
                                    const LayoutScene& scene, const Renderer& renderer,
                                    const Oracle& oracle, const PidSettings& settings) {
  if (edge.status != EdgeStatus::Kept && edge.status != EdgeStatus::Modified) {
    fail(ErrorKind::PreconditionViolation, "only kept or modified edges are refined");
  }
  RefineResult out{scene, {}};
  const auto scale = PidController::from(settings.scale, settings.epsilon, settings.max_iters);
  const auto position = PidController::from(settings.position, settings.epsilon, settings.max_iters);
  for (auto kind : {AttributeKind::Scale, AttributeKind::PositionX, AttributeKind::PositionY,
                    AttributeKind::PositionZ}) {
    AttributeTarget target{edge.subject, kind, 0.0};
    auto step = optimize_attribute(target, out.scene, graph, edge, renderer, oracle,
                                   kind == AttributeKind::Scale ? scale : position);
    out.scene = std::move(step.scene);
    out.traces.push_back(std::move(step.trace));
  }
  return out;
}

std::string format_trace(const PidTrace& trace) {
  std::string out = fmt::format("# {} {} converged={}\n", trace.target.object_id,
                                to_string(trace.target.kind), trace.converged);
  out += "iter\tscore\te\tE\td\tu\tstep\tvalue\n";
  for (const auto& r : trace.rows) {
    out += fmt::format("{}\t{:.6g}\t{:.6g}\t{:.6g}\t{:.6g}\t{:.6g}\t{:.9g}\t{:.9g}\n", r.iteration,
                       r.score, r.error, r.integral, r.derivative, r.u, r.step, r.value);
  }
  return out;
}

}  // namespace causalstruct
