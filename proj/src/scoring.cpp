#include "vigil/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace vigil {

FeatureWeights twitter_weights() {
  // No usable proximity signal on Twitter-like networks, so that kind is
  // absent from this set.
  FeatureWeights w;
  w.weights = {
      {FeatureKind::Source, 3.3},  {FeatureKind::DirectInteraction, 1.4},
      {FeatureKind::Link, 0.96},   {FeatureKind::TimeOfDay, 0.88},
      {FeatureKind::Language, 0.58}, {FeatureKind::Topic, 0.39},
  };
  return w;
}

FeatureWeights facebook_weights() {
  // Language carries no classification signal on Facebook-like streams and
  // topics are not modeled there; both are omitted.
  FeatureWeights w;
  w.weights = {
      {FeatureKind::Source, 2.2},      {FeatureKind::Link, 1.1},
      {FeatureKind::DirectInteraction, 0.13}, {FeatureKind::Proximity, 0.08},
      {FeatureKind::TimeOfDay, 0.06},
  };
  return w;
}

namespace {

// Relative frequency at percent resolution, rounded down. The small nudge
// keeps exact percentages (c/N = k/100) from flooring one step low.
double percent_floor(double f) {
  return std::floor(f * 100.0 + 1e-9) / 100.0;
}

template <typename Map>
double mean_entry_count(const Map& entries) {
  if (entries.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [value, count] : entries) sum += static_cast<double>(count);
  return sum / static_cast<double>(entries.size());
}

template <typename Map>
double score_mandatory_counts(const Map& entries, std::int64_t n,
                              const std::string& value) {
  if (n <= 0 || entries.empty()) return 1.0;  // empty model: fail anomalous
  auto it = entries.find(value);
  if (it == entries.end()) return 1.0;
  const double c = static_cast<double>(it->second);
  if (c >= mean_entry_count(entries)) return 0.0;
  const double f = c / static_cast<double>(n);
  return 1.0 - percent_floor(f);
}

}  // namespace

double score_mandatory(const FeatureModel& model, const std::string& value) {
  if (model.kind == FeatureKind::TimeOfDay && !model.smoothed_entries.empty())
    return score_mandatory_counts(model.smoothed_entries,
                                  model.total_messages, value);
  return score_mandatory_counts(model.entries, model.total_messages, value);
}

double score_optional(const FeatureModel& model,
                      const std::vector<std::string>& values) {
  if (values.empty()) return 0.0;
  if (model.total_messages <= 0) return 0.0;

  double null_probability = 0.0;
  if (auto it = model.entries.find(kNullValue); it != model.entries.end())
    null_probability = static_cast<double>(it->second) /
                       static_cast<double>(model.total_messages);

  double worst = 0.0;
  for (const auto& v : values) {
    auto it = model.entries.find(v);
    const bool seen = it != model.entries.end() && v != kNullValue;
    if (!seen) worst = std::max(worst, null_probability);
  }
  return worst;
}

MessageScore score_message(const BehavioralProfile& profile, const Message& m,
                           const FeatureWeights& weights,
                           int tz_offset_minutes,
                           const LanguageClassifier* classifier) {
  const FeatureSet fs = extract_features(m, tz_offset_minutes, classifier);

  MessageScore score;
  score.message_id = m.message_id;
  score.account_id = m.account_id;

  double weighted_sum = 0.0;
  double weight_sum = 0.0;
  for (FeatureKind kind : kAllFeatureKinds) {
    auto model_it = profile.models.find(kind);
    if (model_it == profile.models.end()) continue;
    const double s = is_mandatory(kind)
                         ? score_mandatory(model_it->second, fs.mandatory_value(kind))
                         : score_optional(model_it->second, fs.optional_values(kind));
    score.per_feature[kind] = s;
    const double w = weights.weight(kind);
    if (w > 0.0) {
      weighted_sum += w * s;
      weight_sum += w;
    }
  }
  score.composite = weight_sum > 0.0 ? weighted_sum / weight_sum : 0.0;
  score.violates_profile = score.composite > weights.threshold;
  return score;
}

json message_score_to_json(const MessageScore& score) {
  json per_feature = json::object();
  for (const auto& [kind, value] : score.per_feature)
    per_feature[feature_kind_name(kind)] = value;
  json j;
  j["message_id"] = score.message_id;
  j["account_id"] = score.account_id;
  j["evaluable"] = true;
  j["per_feature"] = std::move(per_feature);
  j["composite"] = score.composite;
  j["violates_profile"] = score.violates_profile;
  return j;
}

}  // namespace vigil
