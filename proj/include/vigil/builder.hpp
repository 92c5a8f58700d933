#pragma once

#include <optional>
#include <span>

#include "vigil/profile.hpp"

namespace vigil {

inline constexpr int kDefaultMinStreamLength = 10;  // S

// Adjacent-hour averaging with circular wraparound at midnight:
// c'_i = (c_{i-1} + c_i + c_{i+1}) / 3, absent hours counting 0. Fills
// model.smoothed_entries with the nonzero hours. Total mass is preserved.
void smooth_time_model(FeatureModel& model);

// Trains a behavioral profile over a chronological message stream. Returns
// nullopt (StreamTooShort) when the stream has fewer than min_stream_length
// messages; no partial profile is ever produced.
std::optional<BehavioralProfile> build_profile(
    const std::string& account_id, std::span<const Message> stream,
    int min_stream_length, int tz_offset_minutes,
    const LanguageClassifier* classifier);

}  // namespace vigil
