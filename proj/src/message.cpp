#include "vigil/message.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vigil {

namespace {

std::string ascii_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

bool is_scheme_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
         c == '.';
}

bool is_handle_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<std::string> extract_tagged_tokens(const std::string& text,
                                               char marker) {
  std::vector<std::string> out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != marker) continue;
    size_t j = i + 1;
    while (j < text.size() && is_handle_char(text[j])) ++j;
    if (j > i + 1) out.push_back(text.substr(i + 1, j - i - 1));
    i = j - 1;
  }
  return out;
}

}  // namespace

std::optional<ParsedUrl> parse_url(const std::string& url) {
  size_t scheme_end = 0;
  if (url.empty() || !std::isalpha(static_cast<unsigned char>(url[0])))
    return std::nullopt;
  while (scheme_end < url.size() && is_scheme_char(url[scheme_end]))
    ++scheme_end;
  if (scheme_end + 2 >= url.size() || url[scheme_end] != ':' ||
      url[scheme_end + 1] != '/' || url[scheme_end + 2] != '/')
    return std::nullopt;

  size_t auth_start = scheme_end + 3;
  size_t auth_end = url.find_first_of("/?#", auth_start);
  std::string authority = url.substr(
      auth_start, auth_end == std::string::npos ? std::string::npos
                                                : auth_end - auth_start);
  // Strip userinfo and port.
  size_t at = authority.rfind('@');
  if (at != std::string::npos) authority = authority.substr(at + 1);
  if (!authority.empty() && authority.front() == '[') {
    size_t close = authority.find(']');
    if (close == std::string::npos) return std::nullopt;
    authority = authority.substr(0, close + 1);
  } else {
    size_t colon = authority.find(':');
    if (colon != std::string::npos) authority = authority.substr(0, colon);
  }
  if (authority.empty()) return std::nullopt;

  ParsedUrl out;
  out.scheme = ascii_lower(url.substr(0, scheme_end));
  out.host = ascii_lower(authority);
  if (auth_end != std::string::npos && url[auth_end] == '/') {
    size_t path_end = url.find_first_of("?#", auth_end);
    out.path = url.substr(auth_end, path_end == std::string::npos
                                        ? std::string::npos
                                        : path_end - auth_end);
  }
  return out;
}

std::optional<std::string> canonical_url_domain(const std::string& url) {
  auto parsed = parse_url(url);
  if (!parsed) return std::nullopt;
  return parsed->host;
}

int message_hour(const Message& m, int tz_offset_minutes) {
  return hour_of_day(m.timestamp, tz_offset_minutes);
}

std::vector<std::string> extract_mentions_from_text(const std::string& text) {
  return extract_tagged_tokens(text, '@');
}

std::vector<std::string> extract_hashtags_from_text(const std::string& text) {
  auto tags = extract_tagged_tokens(text, '#');
  for (auto& t : tags) t = ascii_lower(t);
  return tags;
}

json message_to_json(const Message& m) {
  json j;
  j["message_id"] = m.message_id;
  j["account_id"] = m.account_id;
  j["timestamp"] = format_rfc3339(m.timestamp);
  j["text"] = m.text;
  j["source_app"] = m.source_app;
  j["urls"] = m.urls;
  j["mentions"] = m.mentions;
  j["hashtags"] = m.hashtags;
  if (m.network) j["network"] = *m.network;
  if (m.recipient_network) j["recipient_network"] = *m.recipient_network;
  if (m.language_hint) j["language_hint"] = *m.language_hint;
  return j;
}

Message message_from_json(const json& j) {
  if (!j.is_object()) throw std::runtime_error("message: not a JSON object");
  Message m;
  auto require_string = [&](const char* key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string())
      throw std::runtime_error(std::string("message: missing field ") + key);
    return it->get<std::string>();
  };
  m.message_id = require_string("message_id");
  if (m.message_id.empty()) throw std::runtime_error("message: empty message_id");
  m.account_id = require_string("account_id");
  if (m.account_id.empty()) throw std::runtime_error("message: empty account_id");
  auto ts = parse_rfc3339(require_string("timestamp"));
  if (!ts) throw std::runtime_error("message: bad timestamp");
  m.timestamp = *ts;

  auto get_string = [&](const char* key, std::string& out) {
    auto it = j.find(key);
    if (it != j.end() && it->is_string()) out = it->get<std::string>();
  };
  get_string("text", m.text);
  get_string("source_app", m.source_app);

  auto get_list = [&](const char* key, std::vector<std::string>& out) -> bool {
    auto it = j.find(key);
    if (it == j.end() || !it->is_array()) return false;
    for (const auto& v : *it)
      if (v.is_string()) out.push_back(v.get<std::string>());
    return true;
  };
  get_list("urls", m.urls);
  if (!get_list("mentions", m.mentions))
    m.mentions = extract_mentions_from_text(m.text);
  if (!get_list("hashtags", m.hashtags))
    m.hashtags = extract_hashtags_from_text(m.text);
  // Normalize hashtags to the canonical form: no '#', lowercase.
  for (auto& h : m.hashtags) {
    if (!h.empty() && h.front() == '#') h.erase(h.begin());
    h = ascii_lower(h);
  }
  for (auto& u : m.mentions)
    if (!u.empty() && u.front() == '@') u.erase(u.begin());

  auto get_optional = [&](const char* key, std::optional<std::string>& out) {
    auto it = j.find(key);
    if (it != j.end() && it->is_string()) out = it->get<std::string>();
  };
  get_optional("network", m.network);
  get_optional("recipient_network", m.recipient_network);
  get_optional("language_hint", m.language_hint);
  return m;
}

JsonlReadResult read_message_jsonl(std::istream& in) {
  JsonlReadResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() ||
        line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    ++result.total_lines;
    try {
      json j = json::parse(line);
      result.messages.push_back(message_from_json(j));
    } catch (const std::exception&) {
      ++result.malformed_lines;
    }
  }
  return result;
}

JsonlReadResult read_message_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_message_jsonl(in);
}

}  // namespace vigil
