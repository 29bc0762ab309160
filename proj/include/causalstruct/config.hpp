#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "causalstruct/bayes_edge.hpp"
#include "causalstruct/layout.hpp"
#include "causalstruct/pid.hpp"
#include "causalstruct/remote_oracle.hpp"

namespace causalstruct {

enum class OracleBackend { Deterministic, Remote };

struct OracleConfig {
  OracleBackend backend = OracleBackend::Deterministic;
  RemoteSettings remote;
  std::filesystem::path cache_dir;
  CacheMode cache_mode = CacheMode::Off;
};

struct PipelineConfig {
  OracleConfig oracle;
  Thresholds thresholds;
  int trials = kDefaultTrials;
  PidSettings pid;
  LayoutParams layout;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
};

/// Throws ConfigError on out-of-range values.
void validate(const PipelineConfig& config);

/// `key = value` lines; `#` starts a comment. Unknown keys are errors.
/// Keys: oracle, endpoint, model, timeout_s, max_retries, backoff_base_s,
/// temperature, cache_dir, cache_mode, trials, tau1, tau2,
/// pid_{scale,position}_{kp,ki,kd,delta,gamma}, pid_epsilon, pid_max_iters,
/// gap_g, grid_g_root, output_dir, seed.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace causalstruct
