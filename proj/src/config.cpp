#include "vigil/config.hpp"

#include <cstdlib>
#include <fstream>

#ifndef VIGIL_DEFAULT_CORPUS_DIR
#define VIGIL_DEFAULT_CORPUS_DIR ""
#endif

namespace vigil {

PipelineConfig config_from_json(const json& j) {
  PipelineConfig cfg;
  if (!j.is_object()) throw ConfigError("config: not a JSON object");

  auto get = [&](const char* key, auto& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
      out = it->get<std::remove_reference_t<decltype(out)>>();
    } catch (const std::exception&) {
      throw ConfigError(std::string("config: invalid value for ") + key);
    }
  };

  get("weights_preset", cfg.weights_preset);
  if (cfg.weights_preset != "twitter" && cfg.weights_preset != "facebook")
    throw ConfigError("config: unknown weights_preset " + cfg.weights_preset);
  get("threshold", cfg.threshold);
  if (cfg.threshold < 0.0 || cfg.threshold > 1.0)
    throw ConfigError("config: threshold must be in [0,1]");
  get("min_stream_length", cfg.min_stream_length);
  get("window_seconds", cfg.window_seconds);
  if (cfg.window_seconds <= 0)
    throw ConfigError("config: window_seconds must be positive");
  get("group_threshold_k", cfg.group_threshold_k);
  get("group_threshold_d", cfg.group_threshold_d);
  get("group_threshold_floor", cfg.group_threshold_floor);
  get("levenshtein_cutoff", cfg.levenshtein_cutoff);
  get("popularity_cutoff", cfg.popularity_cutoff);
  get("app_sample_size", cfg.app_sample_size);
  get("min_group_size", cfg.min_group_size);
  get("allow_list", cfg.allow_list_path);
  get("budget", cfg.budget);
  get("tz_offset_minutes", cfg.tz_offset_minutes);
  get("tz_offsets", cfg.tz_offsets);
  get("corpus_dir", cfg.corpus_dir);
  get("seed", cfg.seed);

  if (auto it = j.find("weights"); it != j.end()) {
    std::map<FeatureKind, double> weights;
    for (const auto& [name, value] : it->items()) {
      auto kind = feature_kind_from_name(name);
      if (!kind) throw ConfigError("config: unknown feature in weights: " + name);
      double w = value.get<double>();
      if (w < 0.0) throw ConfigError("config: negative weight for " + name);
      weights[*kind] = w;
    }
    bool any_positive = false;
    for (const auto& [kind, w] : weights) any_positive |= w > 0.0;
    if (!any_positive) throw ConfigError("config: weights must include a positive entry");
    cfg.weights_override = std::move(weights);
  }
  return cfg;
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

FeatureWeights resolve_weights(const PipelineConfig& cfg) {
  FeatureWeights w = cfg.weights_preset == "facebook" ? facebook_weights()
                                                      : twitter_weights();
  if (cfg.weights_override) w.weights = *cfg.weights_override;
  w.threshold = cfg.threshold;
  return w;
}

std::string default_corpus_dir() {
  if (const char* env = std::getenv("VIGIL_LANG_DIR"); env && *env) return env;
  return VIGIL_DEFAULT_CORPUS_DIR;
}

}  // namespace vigil
