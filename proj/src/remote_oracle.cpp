#include "causalstruct/remote_oracle.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "causalstruct/answer_parser.hpp"
#include "causalstruct/error.hpp"
#include "causalstruct/prompts.hpp"

namespace causalstruct {

using json = nlohmann::json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string base64_encode(std::string_view data) {
  std::string out(4 * ((data.size() + 2) / 3) + 1, '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(data.data()),
                          static_cast<int>(data.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

// --- transport --------------------------------------------------------------

HttpTransport::HttpTransport(std::string endpoint, std::string api_key, double timeout_s)
    : api_key_(std::move(api_key)), timeout_s_(timeout_s) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint, m, re)) {
    fail(ErrorKind::ConfigError, "endpoint must be an http(s) URL: '" + endpoint + "'");
  }
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
  if (!(timeout_s_ > 0.0)) fail(ErrorKind::ConfigError, "timeout must be positive");
}

std::unique_ptr<HttpTransport> HttpTransport::from_environment(const RemoteSettings& settings) {
  const char* key = std::getenv(kApiKeyVariable);
  return std::make_unique<HttpTransport>(settings.endpoint, key ? key : "", settings.timeout_s);
}

std::string HttpTransport::post(const std::string& body) const {
  httplib::Client client(scheme_host_port_);
  auto secs = static_cast<time_t>(timeout_s_);
  auto usecs = static_cast<time_t>((timeout_s_ - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    fail(ErrorKind::OracleUnavailable,
         scheme_host_port_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    fail(ErrorKind::OracleUnavailable, scheme_host_port_ + " returned HTTP " +
                                           std::to_string(res->status));
  }
  return res->body;
}

// --- cache ------------------------------------------------------------------

std::string_view to_string(CacheMode mode) {
  switch (mode) {
    case CacheMode::Off: return "off";
    case CacheMode::ReadWrite: return "readwrite";
    case CacheMode::Replay: return "replay";
  }
  return "off";
}

CacheMode parse_cache_mode(std::string_view text) {
  for (auto m : {CacheMode::Off, CacheMode::ReadWrite, CacheMode::Replay}) {
    if (to_string(m) == text) return m;
  }
  fail(ErrorKind::ConfigError, "unknown cache mode '" + std::string(text) + "'");
}

ResponseCache::ResponseCache(std::filesystem::path dir, CacheMode mode)
    : dir_(std::move(dir)), mode_(mode) {}

std::string ResponseCache::key(std::string_view prompt_text, int trial) {
  std::string material(prompt_text);
  material += "\x1f#trial=" + std::to_string(trial);
  return sha256_hex(material);
}

std::optional<std::string> ResponseCache::load(const std::string& key) const {
  if (mode_ == CacheMode::Off) return std::nullopt;
  std::ifstream in(dir_ / key, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ResponseCache::store(const std::string& key, const std::string& body) const {
  if (mode_ != CacheMode::ReadWrite) return;
  std::filesystem::create_directories(dir_);
  std::ofstream out(dir_ / key, std::ios::binary | std::ios::trunc);
  out << body;
}

// --- oracle -----------------------------------------------------------------

namespace {

std::string normalize(std::string text) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  text.erase(text.begin(), std::find_if(text.begin(), text.end(), not_space));
  text.erase(std::find_if(text.rbegin(), text.rend(), not_space).base(), text.end());
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) {
    return c == ' ' ? '_' : static_cast<char>(std::tolower(c));
  });
  return text;
}

bool names_object(const std::string& token, const SceneObject& object) {
  auto t = normalize(token);
  return t == normalize(object.name) || t == normalize(object.id);
}

std::string extract_content(const std::string& body) {
  try {
    auto doc = json::parse(body);
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) fail(ErrorKind::MalformedResponse, "message content is not text");
    return content.get<std::string>();
  } catch (const json::exception& ex) {
    fail(ErrorKind::MalformedResponse, std::string("unexpected response body: ") + ex.what());
  }
}

std::string input_line(const std::vector<std::array<std::string, 3>>& edges) {
  return "Input: " + prompts::edge_list_literal(edges);
}

std::array<std::string, 3> edge_triple(const EdgeQuery& q) {
  return {q.subject.name, std::string(to_string(q.edge.relation)), q.target.name};
}

std::string fmt_cm(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

std::map<std::string, std::string> edge_slots(const EdgeQuery& q) {
  return {{"subject", q.subject.name},
          {"target", q.target.name},
          {"relation", std::string(to_string(q.edge.relation))},
          {"edge_description", prompts::describe_edge(q.subject.name, q.edge.relation,
                                                      q.target.name)}};
}

}  // namespace

RemoteOracle::RemoteOracle(RemoteSettings settings, std::shared_ptr<const ChatTransport> transport,
                           std::optional<ResponseCache> cache, std::uint64_t seed,
                           std::string scene_prompt)
    : settings_(std::move(settings)),
      transport_(std::move(transport)),
      cache_(std::move(cache)),
      seed_(seed),
      scene_prompt_(std::move(scene_prompt)) {
  if (!(settings_.timeout_s > 0.0)) fail(ErrorKind::ConfigError, "timeout must be positive");
  if (settings_.max_retries < 0) fail(ErrorKind::ConfigError, "max_retries must be >= 0");
}

std::string RemoteOracle::post_with_retries(const std::string& body) const {
  if (!transport_) fail(ErrorKind::OracleUnavailable, "no transport configured");
  double delay = settings_.backoff_base_s;
  for (int attempt = 0;; ++attempt) {
    try {
      return transport_->post(body);
    } catch (const Error& ex) {
      if (ex.kind() != ErrorKind::OracleUnavailable || attempt >= settings_.max_retries) throw;
    }
    if (delay > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    delay *= settings_.backoff_factor;
  }
}

std::string RemoteOracle::complete(std::string_view system, std::string_view user,
                                   const RenderedView* image, int trial, bool sampled) const {
  json messages = json::array();
  messages.push_back({{"role", "system"}, {"content", system}});
  if (image) {
    json parts = json::array();
    parts.push_back({{"type", "text"}, {"text", user}});
    parts.push_back({{"type", "image_url"},
                     {"image_url",
                      {{"url", "data:image/svg+xml;base64," + base64_encode(image->document)}}}});
    messages.push_back({{"role", "user"}, {"content", parts}});
  } else {
    messages.push_back({{"role", "user"}, {"content", user}});
  }

  json request = {{"model", settings_.model},
                  {"messages", messages},
                  {"temperature", sampled ? settings_.temperature : 0.0},
                  {"seed", seed_ + static_cast<std::uint64_t>(trial)}};

  std::string prompt_text(system);
  prompt_text += "\x1e";
  prompt_text += user;
  if (image) prompt_text += "\x1e" + image->document;
  const auto key = ResponseCache::key(prompt_text, trial);

  std::optional<std::string> body;
  if (cache_) body = cache_->load(key);
  if (!body) {
    if (cache_ && cache_->mode() == CacheMode::Replay) {
      fail(ErrorKind::OracleUnavailable, "replay cache has no response for key " + key);
    }
    body = post_with_retries(request.dump());
    if (cache_) cache_->store(key, *body);
  }
  return extract_content(*body);
}

std::vector<std::array<std::string, 3>> RemoteOracle::ask_edges(std::string_view user, int trial,
                                                                bool sampled) const {
  return parse_edge_list_answer(complete(prompts::kCausalOrder, user, nullptr, trial, sampled));
}

PrecedenceEstimate RemoteOracle::query_precedence(const SceneObject& a,
                                                  const SceneObject& b) const {
  if (a.id == b.id) fail(ErrorKind::PreconditionViolation, "precedence of an object with itself");
  auto user = "Objects: " + a.name + ", " + b.name + "\n" +
              "Input: [['" + a.name + "', '?', '" + b.name + "']]\n" +
              "Replace '?' with one allowed word and orient the edge by causal order.";
  for (const auto& e : ask_edges(user, 0, false)) {
    if (names_object(e[0], a) && names_object(e[2], b)) return {0.9, 0.1};
    if (names_object(e[0], b) && names_object(e[2], a)) return {0.1, 0.9};
  }
  return {0.5, 0.5};
}

double RemoteOracle::query_edge_prior(const EdgeQuery& query) const {
  const auto rel = to_string(query.edge.relation);
  bool pair_seen = false;
  for (const auto& e : ask_edges(input_line({edge_triple(query)}), 0, false)) {
    bool forward = names_object(e[0], query.subject) && names_object(e[2], query.target);
    bool backward = names_object(e[0], query.target) && names_object(e[2], query.subject);
    if (forward && normalize(e[1]) == rel) return 0.9;
    pair_seen = pair_seen || forward || backward;
  }
  return pair_seen ? 0.5 : 0.2;
}

double RemoteOracle::query_edge_trials(const EdgeQuery& query, int trials) const {
  if (trials < 1) fail(ErrorKind::PreconditionViolation, "trial count must be at least 1");
  const auto user = input_line({edge_triple(query)});
  const auto rel = to_string(query.edge.relation);
  int affirmed = 0;
  // Trials are combined in index order.
  for (int k = 1; k <= trials; ++k) {
    try {
      for (const auto& e : ask_edges(user, k, true)) {
        if (names_object(e[0], query.subject) && normalize(e[1]) == rel &&
            names_object(e[2], query.target)) {
          ++affirmed;
          break;
        }
      }
    } catch (const Error& ex) {
      if (ex.kind() != ErrorKind::MalformedResponse) throw;
    }
  }
  return static_cast<double>(affirmed) / trials;
}

InterventionJudgment RemoteOracle::query_intervention_judgment(const EdgeQuery& query,
                                                               const RenderedView& view,
                                                               int trial) const {
  auto slots = edge_slots(query);
  slots["prompt"] = scene_prompt_;
  std::string candidates;
  for (auto r : kAllRelations) {
    if (r == query.edge.relation) continue;
    candidates += (candidates.empty() ? "" : ", ") + std::string(to_string(r));
  }
  slots["candidate_relations"] = "{" + candidates + "}";
  auto system = prompts::fill(prompts::kIntervention, slots);
  return parse_judgment_answer(complete(system, "Evaluate the attached image.", &view, trial, true));
}

int RemoteOracle::query_scale_score(const EdgeQuery& query, const RenderedView& view,
                                    const LayoutScene&) const {
  auto slots = edge_slots(query);
  slots["length0"] = fmt_cm(query.subject.dims.length_cm);
  slots["width0"] = fmt_cm(query.subject.dims.width_cm);
  slots["height0"] = fmt_cm(query.subject.dims.height_cm);
  slots["length1"] = fmt_cm(query.target.dims.length_cm);
  slots["width1"] = fmt_cm(query.target.dims.width_cm);
  slots["height1"] = fmt_cm(query.target.dims.height_cm);
  auto system = prompts::fill(prompts::kScaleEvaluation, slots);
  return parse_score_answer(complete(system, "Evaluate the attached image.", &view, 0, false));
}

AxisScores RemoteOracle::query_position_scores(const EdgeQuery& query, const RenderedView& view,
                                               const LayoutScene&) const {
  auto system = prompts::fill(prompts::kPositionEvaluation, edge_slots(query));
  return parse_axis_scores_answer(
      complete(system, "Evaluate the attached images.", &view, 0, false));
}

std::optional<CausalEdge> RemoteOracle::propose_support_edge(const SceneObject& isolated,
                                                             const CausalSceneGraph& graph) const {
  std::vector<std::array<std::string, 3>> current;
  for (auto i : graph.active_edges()) {
    const auto& e = graph.edges[i];
    current.push_back({graph.node(e.subject).name, std::string(to_string(e.relation)),
                       graph.node(e.target).name});
  }
  std::string objects;
  for (const auto& [id, o] : graph.nodes) objects += (objects.empty() ? "" : ", ") + o.name;
  auto user = "Objects: " + objects + "\n" + input_line(current) + "\n" + "The object '" +
              isolated.name + "' has no edge.";

  auto find_node = [&](const std::string& token) -> const SceneObject* {
    for (const auto& [id, o] : graph.nodes) {
      if (names_object(token, o)) return &o;
    }
    return nullptr;
  };
  for (const auto& e : ask_edges(user, 0, false)) {
    auto rel = try_parse_relation(normalize(e[1]));
    const auto* s = find_node(e[0]);
    const auto* t = find_node(e[2]);
    if (!rel || !s || !t || s->id == t->id) continue;
    if (s->id != isolated.id && t->id != isolated.id) continue;
    CausalEdge edge;
    edge.subject = s->id;
    edge.relation = *rel;
    edge.target = t->id;
    return edge;
  }
  return std::nullopt;
}

SceneDraft RemoteOracle::describe_scene(const std::string& prompt) const {
  SceneDraft draft;
  auto edges = ask_edges("Scene description: " + prompt + "\nInput: []", 0, false);
  if (edges.empty()) fail(ErrorKind::MalformedResponse, "the model proposed no edges");

  std::vector<std::string> names;
  auto remember = [&](const std::string& name) {
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
  };
  for (const auto& e : edges) {
    auto rel = try_parse_relation(normalize(e[1]));
    if (!rel) fail(ErrorKind::MalformedResponse, "relation '" + e[1] + "' is outside the vocabulary");
    remember(e[0]);
    remember(e[2]);
    draft.relations.push_back({e[0], *rel, e[2]});
  }

  std::string listing;
  for (const auto& n : names) listing += (listing.empty() ? "" : ", ") + n;
  auto answer = complete("", prompts::fill(prompts::kDimensions, {{"objects", listing}}), nullptr, 0,
                         false);
  static const std::regex span(R"(<Answer>([\s\S]*?)</Answer>)");
  std::smatch m;
  if (!std::regex_search(answer, m, span)) fail(ErrorKind::MalformedResponse, "no <Answer> span");
  const std::string body = m[1].str();
  static const std::regex entry(
      R"(([^:;]+):\s*(\d+(?:\.\d+)?)\s*,\s*(\d+(?:\.\d+)?)\s*,\s*(\d+(?:\.\d+)?))");
  std::map<std::string, Dimensions> dims;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), entry);
       it != std::sregex_iterator(); ++it) {
    dims[normalize((*it)[1].str())] = {std::stod((*it)[2].str()), std::stod((*it)[3].str()),
                                       std::stod((*it)[4].str())};
  }
  for (const auto& n : names) {
    auto it = dims.find(normalize(n));
    if (it == dims.end()) fail(ErrorKind::MalformedResponse, "no dimensions for '" + n + "'");
    draft.objects.push_back({n, std::nullopt, it->second, 1.0, std::nullopt});
  }
  return draft;
}

}  // namespace causalstruct
