#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace vigil {

// Epoch seconds, UTC. All timestamps in the toolkit are second precision.
using Instant = std::int64_t;

// Parses an RFC 3339 timestamp ("2011-07-04T23:24:00Z", offset forms,
// optional fractional seconds which are truncated). Returns nullopt on
// malformed input.
std::optional<Instant> parse_rfc3339(const std::string& text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(Instant t);

// Hour of day 0..23 after applying a fixed offset in minutes.
int hour_of_day(Instant t, int tz_offset_minutes);

}  // namespace vigil
