#include "causalstruct/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include <fmt/format.h>

#include "causalstruct/error.hpp"

namespace causalstruct {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_statements(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) fail(ErrorKind::GrammarError, "unbalanced ')'");
    if ((c == ';' || c == '\n') && depth == 0) {
      if (auto t = trim(cur); !t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) fail(ErrorKind::GrammarError, "unbalanced '('");
  if (auto t = trim(cur); !t.empty()) out.push_back(t);
  return out;
}

struct Statement {
  std::string head;
  std::vector<std::string> args;
};

Statement parse_statement(const std::string& text) {
  auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    fail(ErrorKind::GrammarError, "expected name(args) in '" + text + "'");
  }
  Statement st;
  st.head = trim(std::string_view(text).substr(0, open));
  std::string_view inner = std::string_view(text).substr(open + 1, text.size() - open - 2);
  std::size_t start = 0;
  while (start <= inner.size()) {
    auto comma = inner.find(',', start);
    auto piece = inner.substr(start, comma == std::string_view::npos ? inner.npos : comma - start);
    st.args.push_back(trim(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (st.args.size() == 1 && st.args[0].empty()) st.args.clear();
  for (const auto& a : st.args) {
    if (a.empty()) fail(ErrorKind::GrammarError, "empty argument in '" + text + "'");
  }
  return st;
}

double parse_number(const std::string& text, const std::string& context) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorKind::GrammarError, "'" + text + "' is not a number in " + context);
  }
  return value;
}

void expect_arity(const Statement& st, std::size_t n) {
  if (st.args.size() != n) {
    fail(ErrorKind::GrammarError,
         fmt::format("{}() takes {} arguments, got {}", st.head, n, st.args.size()));
  }
}

SceneDraft::Relation parse_relation_statement(const Statement& st) {
  expect_arity(st, 3);
  auto rel = try_parse_relation(st.args[1]);
  if (!rel) fail(ErrorKind::UnknownRelation, "'" + st.args[1] + "' is not a relation word");
  return {st.args[0], *rel, st.args[2]};
}

std::string format_number(double v) { return fmt::format("{}", v); }

}  // namespace

SceneDraft parse_scene_grammar(std::string_view text) {
  auto statements = split_statements(text);
  if (statements.empty()) fail(ErrorKind::GrammarError, "empty scene description");

  SceneDraft draft;
  std::vector<std::pair<std::string, double>> scales;
  for (const auto& raw : statements) {
    auto st = parse_statement(raw);
    if (st.head == "obj") {
      if (st.args.size() < 4) fail(ErrorKind::GrammarError, "obj() needs name, L, W, H");
      SceneDraft::Object obj;
      obj.name = st.args[0];
      obj.dims = {parse_number(st.args[1], raw), parse_number(st.args[2], raw),
                  parse_number(st.args[3], raw)};
      for (std::size_t i = 4; i < st.args.size(); ++i) {
        auto eq = st.args[i].find('=');
        if (eq == std::string::npos) fail(ErrorKind::GrammarError, "expected key=value in '" + raw + "'");
        auto key = trim(std::string_view(st.args[i]).substr(0, eq));
        auto value = trim(std::string_view(st.args[i]).substr(eq + 1));
        if (value.empty()) fail(ErrorKind::GrammarError, "empty value for '" + key + "'");
        if (key == "id") {
          obj.id = value;
        } else if (key == "asset") {
          obj.asset_ref = value;
        } else {
          fail(ErrorKind::GrammarError, "unknown obj() option '" + key + "'");
        }
      }
      if (!(obj.dims.length_cm > 0 && obj.dims.width_cm > 0 && obj.dims.height_cm > 0)) {
        fail(ErrorKind::GrammarError, "dimensions of '" + obj.name + "' must be positive");
      }
      draft.objects.push_back(std::move(obj));
    } else if (st.head == "rel") {
      draft.relations.push_back(parse_relation_statement(st));
    } else if (st.head == "truth") {
      draft.truths.push_back(parse_relation_statement(st));
    } else if (st.head == "scale") {
      expect_arity(st, 2);
      double s = parse_number(st.args[1], raw);
      if (!(s > 0)) fail(ErrorKind::GrammarError, "scale must be positive in '" + raw + "'");
      scales.emplace_back(st.args[0], s);
    } else {
      fail(ErrorKind::GrammarError, "unknown statement '" + st.head + "'");
    }
  }
  if (draft.objects.empty()) fail(ErrorKind::GrammarError, "no obj() statements");

  auto ids = assign_ids(draft);
  std::set<std::string> unique(ids.begin(), ids.end());
  if (unique.size() != ids.size()) fail(ErrorKind::GrammarError, "duplicate object id");
  for (const auto& [ref, s] : scales) {
    auto id = resolve_object(draft, ids, ref);
    auto at = std::find(ids.begin(), ids.end(), id) - ids.begin();
    draft.objects[static_cast<std::size_t>(at)].scale = s;
  }
  for (const auto* list : {&draft.relations, &draft.truths}) {
    for (const auto& r : *list) {
      if (resolve_object(draft, ids, r.subject) == resolve_object(draft, ids, r.target)) {
        fail(ErrorKind::GrammarError, "relation from '" + r.subject + "' to itself");
      }
    }
  }
  return draft;
}

bool is_scene_grammar(std::string_view text) {
  try {
    parse_scene_grammar(text);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string format_scene_grammar(const SceneDraft& draft) {
  const auto ids = assign_ids(draft);
  std::string out;
  for (std::size_t i = 0; i < draft.objects.size(); ++i) {
    const auto& o = draft.objects[i];
    out += fmt::format("obj({}, {}, {}, {}, id={}", o.name, format_number(o.dims.length_cm),
                       format_number(o.dims.width_cm), format_number(o.dims.height_cm), ids[i]);
    if (o.asset_ref) out += ", asset=" + *o.asset_ref;
    out += ");\n";
  }
  for (std::size_t i = 0; i < draft.objects.size(); ++i) {
    if (draft.objects[i].scale != 1.0) {
      out += fmt::format("scale({}, {});\n", ids[i], format_number(draft.objects[i].scale));
    }
  }
  auto emit = [&](const char* head, const SceneDraft::Relation& r) {
    out += fmt::format("{}({}, {}, {});\n", head, resolve_object(draft, ids, r.subject),
                       to_string(r.relation), resolve_object(draft, ids, r.target));
  };
  for (const auto& r : draft.relations) emit("rel", r);
  for (const auto& r : draft.truths) emit("truth", r);
  return out;
}

std::string slugify(std::string_view name) {
  std::string out;
  bool pending = false;
  for (unsigned char c : name) {
    if (std::isalnum(c)) {
      if (pending && !out.empty()) out += '_';
      pending = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      pending = true;
    }
  }
  return out.empty() ? "object" : out;
}

std::vector<std::string> assign_ids(const SceneDraft& draft) {
  std::set<std::string> used;
  for (const auto& o : draft.objects) {
    if (o.id) used.insert(*o.id);
  }
  std::map<std::string, int> next;
  std::vector<std::string> ids;
  for (const auto& o : draft.objects) {
    if (o.id) {
      ids.push_back(*o.id);
      continue;
    }
    auto slug = slugify(o.name);
    int& n = next[slug];
    std::string id;
    do {
      id = fmt::format("{}-{}", slug, ++n);
    } while (used.count(id));
    used.insert(id);
    ids.push_back(id);
  }
  return ids;
}

std::string resolve_object(const SceneDraft& draft, const std::vector<std::string>& ids,
                           std::string_view ref) {
  for (const auto& id : ids) {
    if (id == ref) return id;
  }
  std::vector<std::string> hits;
  for (std::size_t i = 0; i < draft.objects.size(); ++i) {
    if (draft.objects[i].name == ref) hits.push_back(ids[i]);
  }
  if (hits.size() > 1) {
    fail(ErrorKind::GrammarError, "'" + std::string(ref) + "' names several objects; use an id");
  }
  if (hits.empty()) fail(ErrorKind::UnknownObject, "unknown object '" + std::string(ref) + "'");
  return hits.front();
}

CausalSceneGraph materialize_graph(const SceneDraft& draft, std::string prompt) {
  const auto ids = assign_ids(draft);
  CausalSceneGraph graph;
  graph.prompt = std::move(prompt);
  for (std::size_t i = 0; i < draft.objects.size(); ++i) {
    const auto& o = draft.objects[i];
    SceneObject node;
    node.id = ids[i];
    node.name = o.name;
    node.dims = o.dims;
    node.scale = o.scale;
    node.asset_ref = o.asset_ref;
    graph.nodes.emplace(node.id, node);
  }
  for (const auto& r : draft.relations) {
    CausalEdge e;
    e.subject = resolve_object(draft, ids, r.subject);
    e.relation = r.relation;
    e.target = resolve_object(draft, ids, r.target);
    e.status = EdgeStatus::Proposed;
    graph.edges.push_back(std::move(e));
  }
  return graph;
}

CausalSceneGraph reference_graph(const SceneDraft& draft) {
  const auto ids = assign_ids(draft);
  SceneDraft plain = draft;
  for (auto& o : plain.objects) o.scale = 1.0;

  auto pair_of = [&](const SceneDraft::Relation& r) {
    auto a = resolve_object(draft, ids, r.subject);
    auto b = resolve_object(draft, ids, r.target);
    return a < b ? std::pair{a, b} : std::pair{b, a};
  };
  std::set<std::pair<std::string, std::string>> overridden;
  for (const auto& t : draft.truths) overridden.insert(pair_of(t));

  // First statement per unordered pair wins.
  plain.relations.clear();
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& t : draft.truths) {
    if (seen.insert(pair_of(t)).second) plain.relations.push_back(t);
  }
  for (const auto& r : draft.relations) {
    if (!overridden.count(pair_of(r)) && seen.insert(pair_of(r)).second) {
      plain.relations.push_back(r);
    }
  }
  plain.truths.clear();

  auto graph = materialize_graph(plain, {});
  for (auto& e : graph.edges) e.status = EdgeStatus::Kept;
  return graph;
}

}  // namespace causalstruct
