#include "causalstruct/prompts.hpp"

namespace causalstruct::prompts {

const std::string_view kCausalOrder =
    R"(You are an expert in computer graphics, computer vision, causal analysis, and scene design.
You will be provided with a scene layout graph containing objects (nodes) and their spatial relationships (edges). Your task is to analyze and refine this graph using physical constraints and causal reasoning. Follow these guidelines precisely:

1. Allowed Spatial Relations:
- All nodes need to have an edge.
- Use only the following words to describe connections: {above, under, in, on, front, left, right, corner, behind, left_front, right_front, left_back, right_back, left_on, right_on}.
- Only one word must be selected per edge.

2. Causal Reasoning & Edge Completion:
- If two objects are closely related in real-world use but are not connected in the input graph, infer the missing edge and add it (e.g., add ["lamp", "on", "table"] if missing, but do not add "floor").
- Ensure causal flow integrity: All edges must form a directed acyclic graph following causal order.

3. Causal Order Principles:
- Objects follow a causal flow: obj_2 comes after obj_1 if obj_1's placement depends on obj_2 (e.g., ["cup", "on", "table"]).
- Causal Rule: If obj_1 depends on obj_2, reverse edge and adjust relation. Example: ["table", "under", "cup"] -> ["cup", "on", "table"].
- Size Rule: Larger objects should be obj_2. Transform ["laptop", "left_on", "mouse"] -> ["mouse", "right_on", "laptop"].
- Causal order takes priority over size when they conflict (e.g., ["TV", "on", "stand"], even if TV is larger).

Output Format: The output must contain the following content:
<Answer>edges = [[obj_1, word_1, obj_2], [obj_2, word_4, obj_3], ...]</Answer>.

Example Corrections:
Input: [['laptop','left','mouse'], ['cup','under','table']]
Output: edges = [['mouse','right','laptop'], ['cup','on','table']])";

const std::string_view kIntervention = R"(I will provide an image of a scene.
The image depicts {edge_description} as part of the scene described as: {prompt}.
In this scene, object '{subject}' is currently labeled as '{relation}' relative to '{target}'.

Task:
- Assess whether the given spatial relationship complies with physical laws and real-world scene consistency.
- Based on the provided image and object interactions, determine the validity of the relation using the following criteria:
  - Gravity & Support: Objects must adhere to realistic physical constraints (e.g., smaller objects should rest on larger ones, and unsupported objects should not float).
  - Spatial Positioning: The labeled relationship should match common spatial arrangements (e.g., a chair should be under a table, not above it).
  - Functional Affordance: Objects should maintain plausible real-world functionality (e.g., a monitor should be on a desk, not inside it).

Decision Guidelines:
- If the relationship is valid, return 'keep'.
- If the relationship is incorrect but fixable, return 'modify' and suggest a new relation from the predefined set: {candidate_relations}.

Output Format:
Provide the response strictly in JSON format as follows:
{
    "action": "keep" | "modify",
    "updated_relation": "new_relation"
})";

const std::string_view kScaleEvaluation = R"(I will provide an image of a scene.

Object Dimensions:
- The dimensions (length, width, height) of {subject} in the real world:
  - Length: {length0} cm, Width: {width0} cm, Height: {height0} cm.
- The dimensions (length, width, height) of {target} in the real world:
  - Length: {length1} cm, Width: {width1} cm, Height: {height1} cm.

Task:
- Evaluate the relative scale of the object {subject} compared to {target}.
- The scale of {target} is assumed to be correct, but {subject} may have scaling inconsistencies in the scene with {edge_description}.

Evaluation Criteria:
Scale Comparison: Does {subject} appear appropriately scaled relative to {target}?
   - Consider the effect on scene composition, ensuring it is neither too large nor too small.

Scoring System:
- A score from -100 to 100 is assigned based on scale consistency:
  - Score close to 0: The scale of {subject} is appropriate.
  - Positive score: {subject} is too large compared to {target}, disrupting scene balance.
  - Negative score: {subject} is too small, making it insignificant in the scene.

Output Format:
Provide only the result in the following format, with no additional text:
<Answer>The score is: X</Answer>, where X is the evaluated score.
For example, output: <Answer>The score is: 25</Answer>.)";

const std::string_view kPositionEvaluation = R"(I will send you a sentence and images of a scene.

Scene Description:
The image shows a scene of {edge_description}.

Evaluation Task:
- The position of object {target} is correct.
- Object {subject} may be misplaced in the scene. Evaluate its spatial deviation along three axes.

Scoring Criteria:
Assign a score from -100 to 100 along each axis:
1. Left-Right (X-Axis):
   - Positive score: Too close to {target}.
   - Negative score: Too far from {target}.
2. Forward-Backward (Y-Axis):
   - Positive score: Too close to {target}.
   - Negative score: Too far from {target}.
3. Up-Down (Z-Axis):
   - Positive score: Too high above {target}.
   - Negative score: Too low below {target}.

Output Format:
<Answer>The score-1 is: XX. The score-2 is: YY. The score-3 is: ZZ</Answer>)";

const std::string_view kDimensions = R"(You are an expert in scene design.
For each object listed below, give its typical real-world dimensions in centimeters as length, width, height.
Objects: {objects}

Output Format:
<Answer>name: L, W, H; name: L, W, H; ...</Answer>)";

std::string fill(std::string_view templ, const std::map<std::string, std::string>& slots) {
  std::string out(templ);
  for (const auto& [key, value] : slots) {
    const std::string token = "{" + key + "}";
    for (auto pos = out.find(token); pos != std::string::npos;
         pos = out.find(token, pos + value.size())) {
      out.replace(pos, token.size(), value);
    }
  }
  return out;
}

std::string describe_edge(const std::string& subject, SpatialRelation rel,
                          const std::string& target) {
  std::string word(to_string(rel));
  for (auto& c : word) {
    if (c == '_') c = ' ';
  }
  return "the " + subject + " " + word + " the " + target;
}

std::string edge_list_literal(const std::vector<std::array<std::string, 3>>& edges) {
  std::string out = "[";
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out += ", ";
    out += "['" + edges[i][0] + "', '" + edges[i][1] + "', '" + edges[i][2] + "']";
  }
  return out + "]";
}

std::string relation_set_literal() {
  std::string out = "{";
  for (std::size_t i = 0; i < kAllRelations.size(); ++i) {
    if (i) out += ", ";
    out += to_string(kAllRelations[i]);
  }
  return out + "}";
}

}  // namespace causalstruct::prompts
