#include "causalstruct/answer_parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>

#include <json.hpp>

#include "causalstruct/error.hpp"

namespace causalstruct {

namespace {

std::optional<std::string> answer_span(std::string_view text) {
  static const std::string open = "<Answer>";
  static const std::string close = "</Answer>";
  auto begin = text.find(open);
  if (begin == std::string_view::npos) return std::nullopt;
  begin += open.size();
  auto end = text.find(close, begin);
  if (end == std::string_view::npos) return std::nullopt;
  return std::string(text.substr(begin, end - begin));
}

[[noreturn]] void malformed(const std::string& why) { fail(ErrorKind::MalformedResponse, why); }

std::optional<AxisScores> try_axis_scores(const std::string& body) {
  static const std::regex re(R"(score-([123])\s+is\s*:\s*([+-]?\d+(?:\.\d+)?))",
                             std::regex::icase);
  std::array<std::optional<int>, 3> found;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), re); it != std::sregex_iterator();
       ++it) {
    int slot = std::stoi((*it)[1].str()) - 1;
    if (!found[slot]) found[slot] = clamp_score(std::stod((*it)[2].str()));
  }
  if (!found[0] && !found[1] && !found[2]) return std::nullopt;
  if (!found[0] || !found[1] || !found[2]) malformed("fewer than three axis scores");
  return AxisScores{*found[0], *found[1], *found[2]};
}

std::optional<int> try_score(const std::string& body) {
  static const std::regex re(R"(score\s+is\s*:\s*([+-]?\d+(?:\.\d+)?))", std::regex::icase);
  std::smatch m;
  if (!std::regex_search(body, m, re)) return std::nullopt;
  return clamp_score(std::stod(m[1].str()));
}

std::optional<std::vector<std::array<std::string, 3>>> try_edges(const std::string& body) {
  static const std::regex re(R"(edges\s*=\s*)");
  std::smatch m;
  if (!std::regex_search(body, m, re)) return std::nullopt;
  auto start = body.find('[', static_cast<std::size_t>(m.position(0)));
  if (start == std::string::npos) malformed("edge list has no opening bracket");

  // Scan to the bracket that closes the outer list, normalizing Python-style
  // quotes to JSON.
  std::string json;
  int depth = 0;
  char quote = 0;
  for (std::size_t i = start; i < body.size(); ++i) {
    char c = body[i];
    if (quote) {
      if (c == quote) {
        json += '"';
        quote = 0;
      } else if (c == '"') {
        json += "\\\"";
      } else {
        json += c;
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      json += '"';
      continue;
    }
    json += c;
    if (c == '[') ++depth;
    if (c == ']' && --depth == 0) break;
  }
  if (depth != 0) malformed("unterminated edge list");

  std::vector<std::array<std::string, 3>> edges;
  try {
    auto parsed = nlohmann::json::parse(json);
    for (const auto& row : parsed) {
      if (!row.is_array() || row.size() != 3) malformed("edge entries must have three fields");
      std::array<std::string, 3> triple;
      for (std::size_t k = 0; k < 3; ++k) {
        if (!row[k].is_string()) malformed("edge fields must be strings");
        triple[k] = row[k].get<std::string>();
      }
      edges.push_back(std::move(triple));
    }
  } catch (const nlohmann::json::exception& ex) {
    malformed(std::string("unparseable edge list: ") + ex.what());
  }
  return edges;
}

std::optional<InterventionJudgment> try_judgment(std::string_view text) {
  auto open = text.find('{');
  auto close = text.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    return std::nullopt;
  }
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text.substr(open, close - open + 1));
  } catch (const nlohmann::json::exception&) {
    malformed("unparseable JSON action block");
  }
  if (!obj.is_object() || !obj.contains("action") || !obj["action"].is_string()) {
    malformed("action block lacks an 'action' field");
  }
  auto action = obj["action"].get<std::string>();
  std::transform(action.begin(), action.end(), action.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (action == "keep") return InterventionJudgment::keep();
  if (action != "modify") malformed("action must be 'keep' or 'modify'");
  if (!obj.contains("updated_relation") || !obj["updated_relation"].is_string()) {
    malformed("'modify' without an updated_relation");
  }
  auto rel = try_parse_relation(obj["updated_relation"].get<std::string>());
  if (!rel) malformed("updated_relation is outside the vocabulary");
  return InterventionJudgment::modify(*rel);
}

}  // namespace

AnswerPayload parse_answer_payload(std::string_view text) {
  if (auto body = answer_span(text)) {
    if (auto scores = try_axis_scores(*body)) return AxisScoreAnswer{*scores};
    if (auto score = try_score(*body)) return ScoreAnswer{*score};
    if (auto edges = try_edges(*body)) return EdgeListAnswer{std::move(*edges)};
    if (auto judgment = try_judgment(*body)) return JudgmentAnswer{*judgment};
    malformed("answer span holds no recognized payload");
  }
  if (auto judgment = try_judgment(text)) return JudgmentAnswer{*judgment};
  malformed("no <Answer> span found");
}

int parse_score_answer(std::string_view text) {
  auto payload = parse_answer_payload(text);
  if (auto* s = std::get_if<ScoreAnswer>(&payload)) return s->score;
  malformed("expected a single score");
}

AxisScores parse_axis_scores_answer(std::string_view text) {
  auto payload = parse_answer_payload(text);
  if (auto* s = std::get_if<AxisScoreAnswer>(&payload)) return s->scores;
  malformed("expected three axis scores");
}

std::vector<std::array<std::string, 3>> parse_edge_list_answer(std::string_view text) {
  auto payload = parse_answer_payload(text);
  if (auto* e = std::get_if<EdgeListAnswer>(&payload)) return e->edges;
  malformed("expected an edge list");
}

InterventionJudgment parse_judgment_answer(std::string_view text) {
  auto payload = parse_answer_payload(text);
  if (auto* j = std::get_if<JudgmentAnswer>(&payload)) return j->judgment;
  malformed("expected a keep/modify judgment");
}

}  // namespace causalstruct
