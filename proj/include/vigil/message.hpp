#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vigil/json.hpp"
#include "vigil/time_util.hpp"

namespace vigil {

// One social-network post. Field names match the JSONL wire format.
struct Message {
  std::string message_id;
  std::string account_id;
  Instant timestamp = 0;
  std::string text;
  std::string source_app;
  std::vector<std::string> urls;
  std::vector<std::string> mentions;  // account ids, no '@'
  std::vector<std::string> hashtags;  // lowercase, no '#'
  std::optional<std::string> network;
  std::optional<std::string> recipient_network;
  std::optional<std::string> language_hint;

  bool operator==(const Message&) const = default;
};

// Pieces of a parsed absolute URL. Everything needed by the feature and
// similarity code; no percent-decoding is performed.
struct ParsedUrl {
  std::string scheme;  // lowercased
  std::string host;    // lowercased
  std::string path;    // verbatim, may be empty
};

std::optional<ParsedUrl> parse_url(const std::string& url);

// Lowercased registered host of an absolute URL; port, path, query and
// fragment are dropped. nullopt when the URL cannot be parsed.
std::optional<std::string> canonical_url_domain(const std::string& url);

// Hour of day for a message under a fixed per-account offset.
int message_hour(const Message& m, int tz_offset_minutes);

// '@name' / '#tag' extraction used when the explicit fields are absent.
std::vector<std::string> extract_mentions_from_text(const std::string& text);
std::vector<std::string> extract_hashtags_from_text(const std::string& text);

// JSON (de)serialization. message_from_json throws std::runtime_error on
// missing/invalid required fields; unknown fields are ignored.
json message_to_json(const Message& m);
Message message_from_json(const json& j);

// Reads a JSONL stream of messages. Malformed lines are counted, not fatal.
struct JsonlReadResult {
  std::vector<Message> messages;
  std::size_t total_lines = 0;
  std::size_t malformed_lines = 0;
};
JsonlReadResult read_message_jsonl(std::istream& in);
JsonlReadResult read_message_jsonl_file(const std::string& path);

}  // namespace vigil
