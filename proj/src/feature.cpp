#include "vigil/feature.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace vigil {

bool is_mandatory(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::TimeOfDay:
    case FeatureKind::Source:
    case FeatureKind::Language:
    case FeatureKind::Proximity:
      return true;
    case FeatureKind::Topic:
    case FeatureKind::Link:
    case FeatureKind::DirectInteraction:
      return false;
  }
  return false;
}

const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::TimeOfDay: return "time_of_day";
    case FeatureKind::Source: return "source";
    case FeatureKind::Language: return "language";
    case FeatureKind::Topic: return "topic";
    case FeatureKind::Link: return "link";
    case FeatureKind::DirectInteraction: return "direct_interaction";
    case FeatureKind::Proximity: return "proximity";
  }
  return "unknown";
}

std::optional<FeatureKind> feature_kind_from_name(const std::string& name) {
  for (FeatureKind k : kAllFeatureKinds)
    if (name == feature_kind_name(k)) return k;
  return std::nullopt;
}

const std::string& FeatureSet::mandatory_value(FeatureKind kind) const {
  switch (kind) {
    case FeatureKind::TimeOfDay: return time_of_day;
    case FeatureKind::Source: return source;
    case FeatureKind::Language: return language;
    case FeatureKind::Proximity: return proximity;
    default: throw std::logic_error("not a mandatory feature kind");
  }
}

const std::vector<std::string>& FeatureSet::optional_values(
    FeatureKind kind) const {
  switch (kind) {
    case FeatureKind::Link: return links;
    case FeatureKind::DirectInteraction: return mentions;
    case FeatureKind::Topic: return topics;
    default: throw std::logic_error("not an optional feature kind");
  }
}

namespace {

// Distinct values in first-seen order, dropping the reserved "null" key so
// it can never collide with the absence counter.
std::vector<std::string> distinct_values(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& v : in) {
    if (v.empty() || v == kNullValue) continue;
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

}  // namespace

FeatureSet extract_features(const Message& m, int tz_offset_minutes,
                            const LanguageClassifier* classifier) {
  FeatureSet fs;

  char hour[4];
  std::snprintf(hour, sizeof(hour), "%02d", message_hour(m, tz_offset_minutes));
  fs.time_of_day = hour;

  fs.source = m.source_app;

  if (m.language_hint && !m.language_hint->empty())
    fs.language = *m.language_hint;
  else if (classifier)
    fs.language = classifier->detect(m.text);
  else
    fs.language = "und";

  // A post with no explicit target stays on the sender's own wall: local.
  fs.proximity = (!m.recipient_network || (m.network && *m.recipient_network == *m.network))
                     ? "local"
                     : "nonlocal";

  std::vector<std::string> domains;
  for (const auto& url : m.urls) {
    if (auto domain = canonical_url_domain(url)) domains.push_back(*domain);
  }
  fs.links = distinct_values(domains);
  fs.mentions = distinct_values(m.mentions);
  fs.topics = distinct_values(m.hashtags);
  return fs;
}

}  // namespace vigil
