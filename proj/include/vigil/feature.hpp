#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "vigil/language.hpp"
#include "vigil/message.hpp"

namespace vigil {

enum class FeatureKind {
  TimeOfDay,
  Source,
  Language,
  Topic,
  Link,
  DirectInteraction,
  Proximity,
};

inline constexpr std::array<FeatureKind, 7> kAllFeatureKinds = {
    FeatureKind::TimeOfDay, FeatureKind::Source,   FeatureKind::Language,
    FeatureKind::Topic,     FeatureKind::Link,     FeatureKind::DirectInteraction,
    FeatureKind::Proximity,
};

// Mandatory kinds produce exactly one value per message; optional kinds
// produce zero or more and track absence through the reserved "null" key.
bool is_mandatory(FeatureKind kind);

const char* feature_kind_name(FeatureKind kind);
std::optional<FeatureKind> feature_kind_from_name(const std::string& name);

// Reserved histogram key for optional-model absence counting. Extraction
// never emits it as a value.
inline constexpr const char* kNullValue = "null";

// Canonical feature values for one message.
struct FeatureSet {
  std::string time_of_day;  // "00".."23"
  std::string source;       // application name verbatim
  std::string language;     // ISO 639-1 code or "und"
  std::string proximity;    // "local" / "nonlocal"
  std::vector<std::string> links;     // distinct lowercased domains
  std::vector<std::string> mentions;  // distinct mentioned account ids
  std::vector<std::string> topics;    // distinct lowercase hashtags

  const std::string& mandatory_value(FeatureKind kind) const;
  const std::vector<std::string>& optional_values(FeatureKind kind) const;
};

// Extracts all feature values from a message. Pure and deterministic;
// unparseable URLs are skipped, never fatal. `classifier` may be null when
// every message carries a language_hint.
FeatureSet extract_features(const Message& m, int tz_offset_minutes,
                            const LanguageClassifier* classifier);

}  // namespace vigil
