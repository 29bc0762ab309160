#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "causalstruct/graph.hpp"

namespace causalstruct::prompts {

extern const std::string_view kCausalOrder;
extern const std::string_view kIntervention;
extern const std::string_view kScaleEvaluation;
extern const std::string_view kPositionEvaluation;
extern const std::string_view kDimensions;

/// Replaces every `{key}` slot; unknown slots are left untouched.
std::string fill(std::string_view templ, const std::map<std::string, std::string>& slots);

/// "the cup is on the table" style description of an edge.
std::string describe_edge(const std::string& subject, SpatialRelation rel,
                          const std::string& target);

/// Python-style list literal: [['cup', 'on', 'table'], ...]
std::string edge_list_literal(const std::vector<std::array<std::string, 3>>& edges);

std::string relation_set_literal();

}  // namespace causalstruct::prompts
