#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vigil/message.hpp"

namespace vigil {

enum class SimilarityKind { Text, Url };

const char* similarity_kind_name(SimilarityKind kind);

// Word 4-grams of a message text: lowercase, URLs stripped, whitespace
// tokenization, four consecutive tokens joined by single spaces. Fewer than
// four tokens yield no shingles. Punctuation stays attached to tokens.
std::vector<std::string> text_shingles(const std::string& text);

// scheme + host + path with query and fragment removed and the host
// lowercased. nullopt for unparseable URLs and for hosts that address
// individual content through the query string (youtube.com, facebook.com
// and their www. variants), which this measure cannot compare.
std::optional<std::string> normalize_url_for_similarity(const std::string& url);

struct ObservationWindow {
  Instant start = 0;
  std::int64_t duration = 3600;  // seconds
  std::vector<Message> messages;
};

// A connected set of similar messages inside one window. Members are
// indices into the window's message list.
struct MessageGroup {
  std::string group_id;
  SimilarityKind kind = SimilarityKind::Text;
  std::string key;  // the shared shingle or normalized URL
  std::vector<std::size_t> members;

  std::size_t size() const { return members.size(); }
};

// Groups messages that transitively share a text 4-gram or a normalized
// URL. Components below min_group_size are dropped. Output is ordered by
// descending size (ties: Text before Url, then key), independent of input
// order.
std::vector<MessageGroup> cluster_window(const ObservationWindow& window,
                                         std::size_t min_group_size = 2);

}  // namespace vigil
