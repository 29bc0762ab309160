#pragma once

#include "causalstruct/graph.hpp"
#include "causalstruct/oracle.hpp"

namespace causalstruct {

/// Orients an edge so the subject is the dependent side. The edge is
/// reversed (endpoints swapped, relation inverted when an inverse exists)
/// only when the oracle is more confident in the opposite dependency; equal
/// confidences keep the orientation. Status becomes Ordered.
CausalEdge order_edge(const CausalEdge& edge, const CausalSceneGraph& graph, const Oracle& oracle);

/// Larger objects become the target: when the subject's volume exceeds the
/// target's, swap endpoints and invert the relation. Relations without an
/// inverse are left alone.
CausalEdge apply_size_rule(const CausalEdge& edge, const CausalSceneGraph& graph);

/// Size rule, then causal orientation, for every active edge. Running the
/// causal step last lets it override the size rule.
CausalSceneGraph order_graph(const CausalSceneGraph& graph, const Oracle& oracle);

/// Adds one oracle-proposed edge (status Proposed) for each isolated object.
/// Throws CompletionFailed when the oracle has no usable edge.
CausalSceneGraph complete_edges(const CausalSceneGraph& graph, const Oracle& oracle);

/// Removes duplicate pairs (keeping the highest prior) and then, while a
/// cycle remains, the cycle edge with the lowest prior (ties: smallest
/// (subject, target)).
CausalSceneGraph enforce_dag(const CausalSceneGraph& graph);

}  // namespace causalstruct
