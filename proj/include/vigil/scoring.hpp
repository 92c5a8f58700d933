#pragma once

#include <map>
#include <string>
#include <vector>

#include "vigil/profile.hpp"

namespace vigil {

// Per-feature weights plus the decision threshold. Presets carry the
// published weight sets for Twitter-like and Facebook-like networks.
struct FeatureWeights {
  std::map<FeatureKind, double> weights;
  double threshold = 0.5;

  double weight(FeatureKind kind) const {
    auto it = weights.find(kind);
    return it == weights.end() ? 0.0 : it->second;
  }
};

FeatureWeights twitter_weights();
FeatureWeights facebook_weights();

struct MessageScore {
  std::string message_id;
  std::string account_id;
  std::map<FeatureKind, double> per_feature;
  double composite = 0.0;
  bool violates_profile = false;
};

// Anomaly score in [0, 1] for a mandatory feature value:
//   1.0 when the value was never observed,
//   0.0 when its count reaches the mean count across observed values,
//   1 - f otherwise, with f the value's relative frequency c/N kept at
//   percent resolution (two decimals, rounded down).
// TimeOfDay models score against their smoothed counts.
double score_mandatory(const FeatureModel& model, const std::string& value);

// Anomaly score in [0, 1] for an optional feature: 0 when no value is
// present (absence is never anomalous) or every value was seen before;
// otherwise the account's null probability c_null/N, maximized over the
// message's unseen values.
double score_optional(const FeatureModel& model,
                      const std::vector<std::string>& values);

// Scores a message against a profile. Kinds with zero or missing weight are
// excluded from the composite, which is normalized by the sum of included
// weights. violates_profile holds when the composite exceeds the threshold.
MessageScore score_message(const BehavioralProfile& profile, const Message& m,
                           const FeatureWeights& weights,
                           int tz_offset_minutes,
                           const LanguageClassifier* classifier);

json message_score_to_json(const MessageScore& score);

}  // namespace vigil
