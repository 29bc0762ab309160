#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causalstruct/graph.hpp"

namespace causalstruct {

/// Objects and relations as described by a prompt, before ids are assigned.
/// Relation endpoints name objects by name or by id.
struct SceneDraft {
  struct Object {
    std::string name;
    std::optional<std::string> id;  // assigned from the name when absent
    Dimensions dims;
    double scale = 1.0;
    std::optional<std::string> asset_ref;
  };
  struct Relation {
    std::string subject;
    SpatialRelation relation = SpatialRelation::on;
    std::string target;
  };

  std::vector<Object> objects;
  std::vector<Relation> relations;
  /// Reference relations replacing any relation on the same pair (either
  /// orientation); the remaining relations are taken as true.
  std::vector<Relation> truths;
};

}  // namespace causalstruct
