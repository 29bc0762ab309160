#pragma once

#include <set>
#include <string>

#include "causalstruct/config.hpp"
#include "causalstruct/pipeline.hpp"

namespace causalstruct {

struct EditCommand {
  enum class Kind { Add, Remove, Move, Rescale };

  Kind kind = Kind::Add;
  std::string object;    // id or unique name; unused for Add
  std::string spec;      // Add: grammar with one obj() and its rel() statements
  SpatialRelation relation = SpatialRelation::on;  // Move
  std::string target;    // Move
  double factor = 1.0;   // Rescale

  static EditCommand add(std::string grammar);
  static EditCommand remove(std::string object);
  static EditCommand move(std::string object, SpatialRelation relation, std::string target);
  static EditCommand rescale(std::string object, double factor);

  /// CLI forms: "obj(...); rel(...)", "ID", "ID,relation,TARGET", "ID,factor".
  static EditCommand parse(Kind kind, std::string_view argument);
};

struct EditResult {
  PipelineResult result;
  std::set<std::string> affected;
};

/// Applies one edit to a placed graph (node positions as exported). Only the
/// affected set is re-placed and refined; every other object keeps its exact
/// placement. Throws UnknownObject for unknown ids.
EditResult apply_edit(const CausalSceneGraph& graph, const EditCommand& command,
                      const PipelineConfig& config, const Renderer& renderer,
                      const OracleFactory& oracle_factory);

}  // namespace causalstruct
