#include <doctest.h>

#include <random>
#include <sstream>

#include "vigil/message.hpp"

using namespace vigil;

TEST_CASE("canonical_url_domain extracts the lowercased host") {
  CHECK(canonical_url_domain("http://Example.com/a/b?x=1") == "example.com");
  CHECK(canonical_url_domain("https://t.co/Ab3") == "t.co");
  CHECK(canonical_url_domain("http://user:pw@Site.ORG:8080/path") == "site.org");
  CHECK(canonical_url_domain("ftp://files.example.net/x") == "files.example.net");
}

TEST_CASE("canonical_url_domain rejects malformed input") {
  CHECK_FALSE(canonical_url_domain("notaurl"));
  CHECK_FALSE(canonical_url_domain(""));
  CHECK_FALSE(canonical_url_domain("http://"));
  CHECK_FALSE(canonical_url_domain("mailto:user@example.com"));
  CHECK_FALSE(canonical_url_domain("://missing.scheme"));
}

TEST_CASE("message_hour honors the timezone offset") {
  Message m;
  m.timestamp = *parse_rfc3339("2013-04-23T10:07:00Z");
  CHECK(message_hour(m, 0) == 10);

  m.timestamp = *parse_rfc3339("2011-07-04T23:24:00Z");
  CHECK(message_hour(m, 0) == 23);

  m.timestamp = *parse_rfc3339("2011-07-05T00:30:00Z");
  CHECK(message_hour(m, -60) == 23);  // wraps around midnight
  CHECK(message_hour(m, 90) == 2);
}

TEST_CASE("rfc3339 parsing and formatting") {
  CHECK(format_rfc3339(*parse_rfc3339("2013-04-23T10:07:00Z")) ==
        "2013-04-23T10:07:00Z");
  // Offset form maps to the same instant.
  CHECK(*parse_rfc3339("2013-04-23T12:07:00+02:00") ==
        *parse_rfc3339("2013-04-23T10:07:00Z"));
  CHECK(*parse_rfc3339("2013-04-23T10:07:00.999Z") ==
        *parse_rfc3339("2013-04-23T10:07:00Z"));
  CHECK_FALSE(parse_rfc3339("2013-04-23 10:07"));
  CHECK_FALSE(parse_rfc3339("not a time"));
  CHECK_FALSE(parse_rfc3339("2013-13-23T10:07:00Z"));
}

namespace {

Message random_message(std::mt19937_64& rng) {
  auto pick_word = [&rng] {
    static const char* words[] = {"alpha", "beta", "gamma", "delta", "epsilon"};
    return std::string(words[rng() % 5]);
  };
  Message m;
  m.message_id = "m" + std::to_string(rng() % 1000000);
  m.account_id = "acct" + std::to_string(rng() % 1000);
  m.timestamp = static_cast<Instant>(rng() % 2000000000ULL);
  int words = static_cast<int>(rng() % 8);
  for (int i = 0; i < words; ++i) m.text += (i ? " " : "") + pick_word();
  m.source_app = pick_word();
  if (rng() % 2) m.urls.push_back("http://" + pick_word() + ".com/" + pick_word());
  if (rng() % 2) m.mentions.push_back(pick_word());
  if (rng() % 2) m.hashtags.push_back(pick_word());
  if (rng() % 3 == 0) m.network = pick_word();
  if (rng() % 3 == 0) m.recipient_network = pick_word();
  if (rng() % 3 == 0) m.language_hint = "en";
  return m;
}

}  // namespace

TEST_CASE("message JSON round trip preserves every field") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 500; ++i) {
    Message m = random_message(rng);
    Message back = message_from_json(message_to_json(m));
    CHECK(back == m);
  }
}

TEST_CASE("message parsing fills mentions and hashtags from text when absent") {
  json j{{"message_id", "m1"},
         {"account_id", "a"},
         {"timestamp", "2011-07-04T23:24:00Z"},
         {"text", "hi @bob check #NFL and #nfl again"}};
  Message m = message_from_json(j);
  CHECK(m.mentions == std::vector<std::string>{"bob"});
  CHECK(m.hashtags == std::vector<std::string>{"nfl", "nfl"});

  // Explicit fields win over the text.
  j["mentions"] = json::array({"carol"});
  j["hashtags"] = json::array({"#Sports"});
  m = message_from_json(j);
  CHECK(m.mentions == std::vector<std::string>{"carol"});
  CHECK(m.hashtags == std::vector<std::string>{"sports"});
}

TEST_CASE("message parsing rejects missing required fields") {
  CHECK_THROWS(message_from_json(json{{"account_id", "a"}}));
  CHECK_THROWS(message_from_json(json{{"message_id", ""},
                                      {"account_id", "a"},
                                      {"timestamp", "2011-07-04T23:24:00Z"}}));
  CHECK_THROWS(message_from_json(json{{"message_id", "m"},
                                      {"account_id", "a"},
                                      {"timestamp", "yesterday"}}));
  CHECK_THROWS(message_from_json(json::array()));
}

TEST_CASE("jsonl reader counts malformed lines and keeps going") {
  std::istringstream in(
      "{\"message_id\":\"m1\",\"account_id\":\"a\",\"timestamp\":\"2011-07-04T23:24:00Z\"}\n"
      "this is not json\n"
      "\n"
      "{\"message_id\":\"m2\",\"account_id\":\"a\",\"timestamp\":\"2011-07-04T23:25:00Z\",\"extra\":1}\n");
  auto result = read_message_jsonl(in);
  CHECK(result.total_lines == 3);
  CHECK(result.malformed_lines == 1);
  REQUIRE(result.messages.size() == 2);
  CHECK(result.messages[1].message_id == "m2");  // unknown fields ignored
}
