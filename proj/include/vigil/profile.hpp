#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "vigil/feature.hpp"
#include "vigil/json.hpp"
#include "vigil/time_util.hpp"

namespace vigil {

// Histogram of observed values for one feature. Mandatory models satisfy
// sum(entries) == total_messages; optional models additionally count
// value-free messages under the reserved "null" key.
struct FeatureModel {
  FeatureKind kind = FeatureKind::Source;
  std::map<std::string, std::int64_t> entries;
  std::int64_t total_messages = 0;  // N
  // TimeOfDay only: adjacent-hour averaged counts, keyed "00".."23",
  // zero-valued hours omitted. Used instead of `entries` when scoring.
  std::map<std::string, double> smoothed_entries;

  bool operator==(const FeatureModel&) const = default;
};

struct BehavioralProfile {
  std::string account_id;
  std::map<FeatureKind, FeatureModel> models;  // one per feature kind
  std::int64_t trained_on = 0;                 // message count (= N)
  Instant trained_at = 0;

  const FeatureModel& model(FeatureKind kind) const { return models.at(kind); }

  bool operator==(const BehavioralProfile&) const = default;
};

json profile_to_json(const BehavioralProfile& p);
BehavioralProfile profile_from_json(const json& j);

}  // namespace vigil
