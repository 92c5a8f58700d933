#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vigil/json.hpp"
#include "vigil/time_util.hpp"

namespace vigil {

class SimSpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Which habitual features a campaign imitates on each victim. Everything
// not mimicked uses the campaign's own values (new app, template text,
// campaign link, window timing).
struct StealthSpec {
  bool source = false;
  bool time_of_day = false;
  bool language_text = false;  // per-victim habitual wording around a shared tail
  bool link = false;
  bool mentions = false;
  bool hashtags = false;

  static StealthSpec none() { return {}; }
  static StealthSpec all();
};

struct CampaignSpec {
  std::string app = "BulkBlaster";
  std::string template_text = "win a free phone click here now";
  std::string url;  // "{n}" expands to the victim ordinal
  std::size_t victims = 50;
  std::int64_t start_offset_seconds = 300;
  std::int64_t spacing_seconds = 10;
  StealthSpec stealth;
};

// Synthetic stream description: account habits are derived from these pools
// deterministically per account, campaigns are injected into the
// observation window.
struct SimSpec {
  std::size_t accounts = 200;
  std::string account_prefix = "user";
  int history_messages_min = 20;
  int history_messages_max = 30;
  int history_days = 3;
  Instant window_start = 0;
  std::int64_t window_seconds = 3600;
  std::size_t window_benign_messages = 100;
  std::vector<std::string> languages = {"en"};
  std::vector<std::string> sources = {"Web Client", "Phone App", "Desk Deck",
                                      "Flow Studio"};
  std::vector<std::string> link_domains = {"example.com", "news.example.org",
                                           "blog.example.net"};
  std::vector<std::string> hashtag_pool = {"coffee", "news", "music", "sports",
                                           "travel"};
  std::vector<CampaignSpec> campaigns;
};

// Parses a spec document. Throws SimSpecError with a field path on invalid
// content.
SimSpec sim_spec_from_json(const json& j);
SimSpec load_sim_spec(const std::string& path);

struct SimulateResult {
  std::size_t history_messages = 0;
  std::size_t window_messages = 0;
  std::size_t campaign_messages = 0;
};

// Writes the training history, the observation-window stream, and the
// ground-truth (account_id, message_id) pairs of injected campaign
// messages. Byte-identical output for identical spec and seed.
SimulateResult run_simulate(const SimSpec& spec, std::uint64_t seed,
                            std::ostream& history_out, std::ostream& stream_out,
                            std::ostream& truth_out);

}  // namespace vigil
