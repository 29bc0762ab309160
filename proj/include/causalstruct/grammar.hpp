#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "causalstruct/graph.hpp"
#include "causalstruct/scene_draft.hpp"

namespace causalstruct {

/// Structured scene text, statements separated by `;` or newlines:
///   obj(name, L, W, H[, id=ID][, asset=REF])   dimensions in cm
///   rel(a, word, b)                            proposed relation
///   truth(a, word, b)                          reference relation for the pair
///   scale(a, s)                                initial scale (reference is 1)
/// Endpoints name an object by id, or by name when the name is unique.
/// Throws GrammarError.
SceneDraft parse_scene_grammar(std::string_view text);

/// True when the text parses as scene grammar.
bool is_scene_grammar(std::string_view text);

/// Canonical text for a draft, with explicit ids; parses back to the same draft.
std::string format_scene_grammar(const SceneDraft& draft);

/// Lower-case, alphanumerics kept, other runs collapsed to '_'.
std::string slugify(std::string_view name);

/// Object ids in draft order: explicit ids kept, others slug(name)-N with the
/// smallest free N starting at 1.
std::vector<std::string> assign_ids(const SceneDraft& draft);

/// Id for an endpoint reference. Throws UnknownObject or GrammarError (ambiguous).
std::string resolve_object(const SceneDraft& draft, const std::vector<std::string>& ids,
                           std::string_view ref);

/// Nodes at their initial scales plus one Proposed edge per relation.
CausalSceneGraph materialize_graph(const SceneDraft& draft, std::string prompt);

/// The reference scene for the rule-based oracle: reference relations with
/// every scale at 1.
CausalSceneGraph reference_graph(const SceneDraft& draft);

}  // namespace causalstruct
