#include "vigil/builder.hpp"

#include <cstdio>

namespace vigil {

void smooth_time_model(FeatureModel& model) {
  double raw[24] = {0};
  for (const auto& [hour, count] : model.entries) {
    int h = std::stoi(hour);
    if (h >= 0 && h < 24) raw[h] = static_cast<double>(count);
  }
  model.smoothed_entries.clear();
  for (int h = 0; h < 24; ++h) {
    double avg = (raw[(h + 23) % 24] + raw[h] + raw[(h + 1) % 24]) / 3.0;
    if (avg > 0.0) {
      char key[4];
      std::snprintf(key, sizeof(key), "%02d", h);
      model.smoothed_entries[key] = avg;
    }
  }
}

std::optional<BehavioralProfile> build_profile(
    const std::string& account_id, std::span<const Message> stream,
    int min_stream_length, int tz_offset_minutes,
    const LanguageClassifier* classifier) {
  if (std::cmp_less(stream.size(), min_stream_length)) return std::nullopt;

  BehavioralProfile profile;
  profile.account_id = account_id;
  profile.trained_on = static_cast<std::int64_t>(stream.size());
  profile.trained_at = stream.empty() ? 0 : stream.back().timestamp;
  for (FeatureKind kind : kAllFeatureKinds) {
    FeatureModel model;
    model.kind = kind;
    model.total_messages = profile.trained_on;
    profile.models.emplace(kind, std::move(model));
  }

  for (const Message& m : stream) {
    FeatureSet fs = extract_features(m, tz_offset_minutes, classifier);
    for (FeatureKind kind : kAllFeatureKinds) {
      FeatureModel& model = profile.models.at(kind);
      if (is_mandatory(kind)) {
        ++model.entries[fs.mandatory_value(kind)];
      } else {
        const auto& values = fs.optional_values(kind);
        if (values.empty())
          ++model.entries[kNullValue];
        else
          for (const auto& v : values) ++model.entries[v];
      }
    }
  }

  smooth_time_model(profile.models.at(FeatureKind::TimeOfDay));
  return profile;
}

}  // namespace vigil
