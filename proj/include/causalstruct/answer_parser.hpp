#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "causalstruct/oracle.hpp"

namespace causalstruct {

struct ScoreAnswer {
  int score = 0;
  friend bool operator==(const ScoreAnswer&, const ScoreAnswer&) = default;
};

struct AxisScoreAnswer {
  AxisScores scores;
  friend bool operator==(const AxisScoreAnswer&, const AxisScoreAnswer&) = default;
};

/// `[obj_1, word, obj_2]` triples as written by the model; relation words are
/// not validated here.
struct EdgeListAnswer {
  std::vector<std::array<std::string, 3>> edges;
  friend bool operator==(const EdgeListAnswer&, const EdgeListAnswer&) = default;
};

struct JudgmentAnswer {
  InterventionJudgment judgment;
  friend bool operator==(const JudgmentAnswer&, const JudgmentAnswer&) = default;
};

using AnswerPayload = std::variant<ScoreAnswer, AxisScoreAnswer, EdgeListAnswer, JudgmentAnswer>;

/// Extracts the first <Answer>...</Answer> span (or, failing that, a bare
/// keep/modify JSON object) and parses it. Throws MalformedResponse.
AnswerPayload parse_answer_payload(std::string_view text);

int parse_score_answer(std::string_view text);
AxisScores parse_axis_scores_answer(std::string_view text);
std::vector<std::array<std::string, 3>> parse_edge_list_answer(std::string_view text);
InterventionJudgment parse_judgment_answer(std::string_view text);

}  // namespace causalstruct
