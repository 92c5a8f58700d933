#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "vigil/scoring.hpp"

namespace vigil {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Single-document pipeline configuration. Every knob has a default; a JSON
// config file overrides defaults and CLI flags override both.
struct PipelineConfig {
  std::string weights_preset = "twitter";  // "twitter" or "facebook"
  std::optional<std::map<FeatureKind, double>> weights_override;
  double threshold = 0.5;
  int min_stream_length = 10;  // S
  std::int64_t window_seconds = 3600;
  double group_threshold_k = -0.005;
  double group_threshold_d = 0.82;
  double group_threshold_floor = 0.1;
  double levenshtein_cutoff = 0.35;
  double popularity_cutoff = 1e6;
  int app_sample_size = 10;
  std::size_t min_group_size = 2;
  std::string allow_list_path;
  std::int64_t budget = 0;  // profile loads per window, 0 = unlimited
  int tz_offset_minutes = 0;
  std::map<std::string, int> tz_offsets;  // per-account overrides
  std::string corpus_dir;                 // empty: compiled-in default
  std::uint64_t seed = 1;

  int tz_offset_for(const std::string& account_id) const {
    auto it = tz_offsets.find(account_id);
    return it == tz_offsets.end() ? tz_offset_minutes : it->second;
  }
};

// Throws ConfigError on unreadable files or invalid values.
PipelineConfig load_config_file(const std::string& path);
PipelineConfig config_from_json(const json& j);

// Weight set per the configured preset, with overrides and threshold applied.
FeatureWeights resolve_weights(const PipelineConfig& cfg);

// Default bundled corpus directory (set at build time).
std::string default_corpus_dir();

}  // namespace vigil
