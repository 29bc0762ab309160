#include "causalstruct/config.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "causalstruct/error.hpp"
#include "causalstruct/scene_io.hpp"

namespace causalstruct {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorKind::ConfigError, "bad value '" + text + "' for " + key);
  }
  return value;
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

template <typename T, typename F>
Setter number(F field) {
  return [field](PipelineConfig& c, const std::string& k, const std::string& v) {
    field(c) = parse_value<T>(k, v);
  };
}

void add_gains(std::map<std::string, Setter>& table, const std::string& prefix,
               PidGains PidSettings::*gains) {
  table[prefix + "kp"] = number<double>([gains](PipelineConfig& c) -> double& { return (c.pid.*gains).kp; });
  table[prefix + "ki"] = number<double>([gains](PipelineConfig& c) -> double& { return (c.pid.*gains).ki; });
  table[prefix + "kd"] = number<double>([gains](PipelineConfig& c) -> double& { return (c.pid.*gains).kd; });
  table[prefix + "delta"] =
      number<double>([gains](PipelineConfig& c) -> double& { return (c.pid.*gains).delta_max; });
  table[prefix + "gamma"] =
      number<double>([gains](PipelineConfig& c) -> double& { return (c.pid.*gains).gamma; });
}

const std::map<std::string, Setter>& setters() {
  static const auto table = [] {
    std::map<std::string, Setter> t;
    t["oracle"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
      if (v == "deterministic") {
        c.oracle.backend = OracleBackend::Deterministic;
      } else if (v == "remote") {
        c.oracle.backend = OracleBackend::Remote;
      } else {
        fail(ErrorKind::ConfigError, "bad value '" + v + "' for " + k);
      }
    };
    t["endpoint"] = [](PipelineConfig& c, const std::string&, const std::string& v) {
      c.oracle.remote.endpoint = v;
    };
    t["model"] = [](PipelineConfig& c, const std::string&, const std::string& v) {
      c.oracle.remote.model = v;
    };
    t["cache_dir"] = [](PipelineConfig& c, const std::string&, const std::string& v) {
      c.oracle.cache_dir = v;
    };
    t["cache_mode"] = [](PipelineConfig& c, const std::string&, const std::string& v) {
      try {
        c.oracle.cache_mode = parse_cache_mode(v);
      } catch (const Error& e) {
        fail(ErrorKind::ConfigError, e.what());
      }
    };
    t["output_dir"] = [](PipelineConfig& c, const std::string&, const std::string& v) {
      c.output_dir = v;
    };
    t["timeout_s"] = number<double>([](PipelineConfig& c) -> double& { return c.oracle.remote.timeout_s; });
    t["max_retries"] = number<int>([](PipelineConfig& c) -> int& { return c.oracle.remote.max_retries; });
    t["backoff_base_s"] =
        number<double>([](PipelineConfig& c) -> double& { return c.oracle.remote.backoff_base_s; });
    t["temperature"] =
        number<double>([](PipelineConfig& c) -> double& { return c.oracle.remote.temperature; });
    t["trials"] = number<int>([](PipelineConfig& c) -> int& { return c.trials; });
    t["tau1"] = number<double>([](PipelineConfig& c) -> double& { return c.thresholds.tau1; });
    t["tau2"] = number<double>([](PipelineConfig& c) -> double& { return c.thresholds.tau2; });
    t["pid_epsilon"] = number<double>([](PipelineConfig& c) -> double& { return c.pid.epsilon; });
    t["pid_max_iters"] = number<int>([](PipelineConfig& c) -> int& { return c.pid.max_iters; });
    t["gap_g"] = number<double>([](PipelineConfig& c) -> double& { return c.layout.gap; });
    t["grid_g_root"] = number<double>([](PipelineConfig& c) -> double& { return c.layout.grid_spacing; });
    t["seed"] = number<std::uint64_t>([](PipelineConfig& c) -> std::uint64_t& { return c.seed; });
    add_gains(t, "pid_scale_", &PidSettings::scale);
    add_gains(t, "pid_position_", &PidSettings::position);
    return t;
  }();
  return table;
}

}  // namespace

void validate(const PipelineConfig& c) {
  try {
    validate(c.thresholds);
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, e.what());
  }
  if (c.trials < 1) fail(ErrorKind::ConfigError, "trials must be at least 1");
  for (const auto* g : {&c.pid.scale, &c.pid.position}) {
    validate(PidController::from(*g, c.pid.epsilon, c.pid.max_iters));
  }
  if (!(c.layout.gap >= 0.0) || !(c.layout.grid_spacing > 0.0)) {
    fail(ErrorKind::ConfigError, "layout gaps must be non-negative and the grid pitch positive");
  }
  if (c.oracle.backend == OracleBackend::Remote) {
    if (c.oracle.remote.endpoint.empty() && c.oracle.cache_mode != CacheMode::Replay) {
      fail(ErrorKind::ConfigError, "remote oracle needs an endpoint");
    }
    if (c.oracle.cache_mode != CacheMode::Off && c.oracle.cache_dir.empty()) {
      fail(ErrorKind::ConfigError, "cache_mode needs cache_dir");
    }
    if (c.oracle.remote.max_retries < 0) fail(ErrorKind::ConfigError, "max_retries must be >= 0");
  }
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::ConfigError, "line " + std::to_string(number) + ": expected key = value");
    }
    auto key = trim(std::string_view(line).substr(0, eq));
    auto value = trim(std::string_view(line).substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) fail(ErrorKind::ConfigError, "unknown config key '" + key + "'");
    it->second(config, key, value);
  }
  validate(config);
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(read_text_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    fail(ErrorKind::ConfigError, e.what());
  }
}

}  // namespace causalstruct
