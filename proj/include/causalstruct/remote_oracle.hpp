#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "causalstruct/oracle.hpp"
#include "causalstruct/scene_draft.hpp"

namespace causalstruct {

inline constexpr const char* kApiKeyVariable = "CAUSALSTRUCT_API_KEY";

struct RemoteSettings {
  std::string endpoint;  // e.g. http://localhost:8080/v1/chat/completions
  std::string model;
  double timeout_s = 60.0;
  int max_retries = 3;
  double backoff_base_s = 1.0;
  double backoff_factor = 2.0;
  double temperature = 0.7;  // used for repeated trials; single-shot queries use 0
};

/// Sends one chat-completions request body and returns the raw response body.
/// Throws OracleUnavailable on transport failure or a non-success status.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string post(const std::string& body) const = 0;
};

class HttpTransport final : public ChatTransport {
 public:
  HttpTransport(std::string endpoint, std::string api_key, double timeout_s);
  /// Bearer token from CAUSALSTRUCT_API_KEY, if set.
  static std::unique_ptr<HttpTransport> from_environment(const RemoteSettings& settings);
  std::string post(const std::string& body) const override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
  double timeout_s_;
};

enum class CacheMode { Off, ReadWrite, Replay };

std::string_view to_string(CacheMode mode);
CacheMode parse_cache_mode(std::string_view text);

/// One file per key holding the raw response body. In Replay mode a miss is
/// an error instead of a network call.
class ResponseCache {
 public:
  ResponseCache(std::filesystem::path dir, CacheMode mode);

  CacheMode mode() const { return mode_; }
  const std::filesystem::path& dir() const { return dir_; }
  std::optional<std::string> load(const std::string& key) const;
  void store(const std::string& key, const std::string& body) const;

  /// Hex SHA-256 of the prompt text and trial index.
  static std::string key(std::string_view prompt_text, int trial);

 private:
  std::filesystem::path dir_;
  CacheMode mode_;
};

std::string sha256_hex(std::string_view data);
std::string base64_encode(std::string_view data);

class RemoteOracle final : public Oracle {
 public:
  RemoteOracle(RemoteSettings settings, std::shared_ptr<const ChatTransport> transport,
               std::optional<ResponseCache> cache = std::nullopt, std::uint64_t seed = 0,
               std::string scene_prompt = {});

  PrecedenceEstimate query_precedence(const SceneObject& a, const SceneObject& b) const override;
  double query_edge_prior(const EdgeQuery& query) const override;
  double query_edge_trials(const EdgeQuery& query, int trials) const override;
  InterventionJudgment query_intervention_judgment(const EdgeQuery& query,
                                                   const RenderedView& view,
                                                   int trial) const override;
  int query_scale_score(const EdgeQuery& query, const RenderedView& view,
                        const LayoutScene& scene) const override;
  AxisScores query_position_scores(const EdgeQuery& query, const RenderedView& view,
                                   const LayoutScene& scene) const override;
  std::optional<CausalEdge> propose_support_edge(const SceneObject& isolated,
                                                 const CausalSceneGraph& graph) const override;

  /// Free-text scene description to objects and relations: one causal-order
  /// query for the edges, then one query for object dimensions.
  SceneDraft describe_scene(const std::string& prompt) const;

  /// Returns the assistant message content for one prompt and trial, going
  /// through the cache first.
  std::string complete(std::string_view system, std::string_view user, const RenderedView* image,
                       int trial, bool sampled) const;

 private:
  std::string post_with_retries(const std::string& body) const;
  std::vector<std::array<std::string, 3>> ask_edges(std::string_view user, int trial,
                                                    bool sampled) const;

  RemoteSettings settings_;
  std::shared_ptr<const ChatTransport> transport_;
  std::optional<ResponseCache> cache_;
  std::uint64_t seed_;
  std::string scene_prompt_;
};

}  // namespace causalstruct
