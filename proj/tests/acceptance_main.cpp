// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// anything fails. Heavier end-to-end runs live here rather than in the
// unit tests.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>
#include <vector>

#include "vigil/builder.hpp"
#include "vigil/campaign.hpp"
#include "vigil/clustering.hpp"
#include "vigil/pipeline.hpp"
#include "vigil/simulate.hpp"
#include "vigil/store.hpp"

using namespace vigil;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("vigil-accept-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

PipelineConfig base_config() {
  PipelineConfig cfg;
  cfg.corpus_dir = VIGIL_TEST_CORPUS_DIR;
  return cfg;
}

std::vector<json> parse_jsonl(const std::string& text) {
  std::vector<json> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(json::parse(line));
  return lines;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FeatureModel model_of(FeatureKind kind,
                      std::map<std::string, std::int64_t> entries,
                      std::int64_t n) {
  FeatureModel m;
  m.kind = kind;
  m.entries = std::move(entries);
  m.total_messages = n;
  return m;
}

// ---------------------------------------------------------------------------
// 1. Worked-example fidelity: the published language-model walkthrough.

Outcome criterion_worked_example() {
  Outcome out;
  FeatureModel lang = model_of(FeatureKind::Language, {{"en", 12}, {"de", 9}}, 21);
  const double s_en = score_mandatory(lang, "en");
  const double s_ru = score_mandatory(lang, "ru");
  const double s_de = score_mandatory(lang, "de");
  out.require(s_en == 0.0, "score(en) != 0.0");
  out.require(s_ru == 1.0, "score(ru) != 1.0");
  out.require(std::abs(s_de - 0.58) <= 0.005,
              "score(de) = " + std::to_string(s_de) + " not within 0.58 +/- 0.005");
  return out;
}

// ---------------------------------------------------------------------------
// 2. Group threshold function: pinned values and monotonicity.

Outcome criterion_threshold_function() {
  Outcome out;
  out.require(std::abs(group_threshold(4) - 0.80) <= 1e-9, "th(4) != 0.80");
  out.require(std::abs(group_threshold(144) - 0.10) <= 1e-9, "th(144) != 0.10");
  out.require(std::abs(group_threshold(1000) - 0.10) <= 1e-9, "th(1000) != 0.10");
  double prev = group_threshold(1);
  for (std::size_t n = 2; n <= 10000; ++n) {
    const double th = group_threshold(n);
    if (th > prev + 1e-12) {
      out.require(false, "th not non-increasing at n=" + std::to_string(n));
      break;
    }
    prev = th;
  }
  return out;
}

// ---------------------------------------------------------------------------
// 3. Scoring invariants over 10,000 randomized (profile, message) pairs.

Message random_history_message(std::mt19937_64& rng, const std::string& account) {
  static const char* langs[] = {"en", "de", "es", "fr"};
  static const char* sources[] = {"web", "phone", "deck", "studio"};
  Message m;
  static int counter = 0;
  m.message_id = "r" + std::to_string(counter++);
  m.account_id = account;
  m.timestamp = static_cast<Instant>(rng() % 864000);
  m.source_app = sources[rng() % 4];
  m.language_hint = langs[rng() % 4];
  if (rng() % 3 == 0)
    m.urls.push_back("http://d" + std::to_string(rng() % 6) + ".com/p");
  if (rng() % 4 == 0) m.mentions.push_back("f" + std::to_string(rng() % 8));
  if (rng() % 4 == 0) m.hashtags.push_back("t" + std::to_string(rng() % 8));
  return m;
}

Outcome criterion_scoring_invariants() {
  Outcome out;
  std::mt19937_64 rng(0xACCE5501);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int round = 0; round < 10000 && out.pass; ++round) {
    std::vector<Message> stream;
    const int n = 10 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i)
      stream.push_back(random_history_message(rng, "acct"));
    std::sort(stream.begin(), stream.end(),
              [](const Message& a, const Message& b) {
                return a.timestamp < b.timestamp;
              });
    auto profile = build_profile("acct", stream, 10, 0, nullptr);
    if (!profile) {
      out.require(false, "trainer rejected a valid stream");
      break;
    }

    Message probe = random_history_message(rng, "acct");
    if (rng() % 3 == 0) probe.language_hint = "ru";
    if (rng() % 3 == 0) probe.source_app = "novel-app";

    FeatureWeights weights = twitter_weights();
    MessageScore score = score_message(*profile, probe, weights, 0, nullptr);
    for (const auto& [kind, value] : score.per_feature)
      out.require(value >= 0.0 && value <= 1.0,
                  std::string("per-feature score out of range for ") +
                      feature_kind_name(kind));
    out.require(score.composite >= 0.0 && score.composite <= 1.0,
                "composite out of range");

    // Decision and weighted argmax invariance under uniform scaling.
    FeatureWeights scaled = weights;
    const double factor = 0.1 + 9.9 * unit(rng);
    for (auto& [kind, w] : scaled.weights) w *= factor;
    MessageScore rescored = score_message(*profile, probe, scaled, 0, nullptr);
    out.require(rescored.violates_profile == score.violates_profile,
                "decision changed under weight scaling");
    auto weighted_argmax = [](const MessageScore& s, const FeatureWeights& w) {
      FeatureKind best = FeatureKind::Source;
      double best_v = -1.0;
      for (const auto& [kind, value] : s.per_feature) {
        const double v = w.weight(kind) * value;
        if (v > best_v) {
          best_v = v;
          best = kind;
        }
      }
      return best;
    };
    out.require(weighted_argmax(score, weights) == weighted_argmax(rescored, scaled),
                "argmax changed under weight scaling");

    // Monotonicity: more observations of a value never raise its score.
    FeatureKind kind = std::array{FeatureKind::Source, FeatureKind::Language,
                                  FeatureKind::Proximity}[rng() % 3];
    FeatureModel model = profile->model(kind);
    std::string value;
    if (!model.entries.empty() && rng() % 2) {
      auto it = model.entries.begin();
      std::advance(it, rng() % model.entries.size());
      value = it->first;
    } else {
      value = "unseen-value";
    }
    const double before = score_mandatory(model, value);
    const std::int64_t extra = 1 + static_cast<std::int64_t>(rng() % 10);
    model.entries[value] += extra;
    model.total_messages += extra;
    const double after = score_mandatory(model, value);
    out.require(after <= before + 1e-12, "score increased with extra counts");
  }
  return out;
}

// ---------------------------------------------------------------------------
// 4. Clustering equals a brute-force O(n^2) oracle on random windows.

std::set<std::set<std::string>> oracle_partition(const ObservationWindow& w,
                                                 std::size_t min_group_size) {
  const std::size_t n = w.messages.size();
  std::vector<std::set<std::string>> shingles(n), urls(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto sh = text_shingles(w.messages[i].text);
    shingles[i].insert(sh.begin(), sh.end());
    for (const auto& raw : w.messages[i].urls)
      if (auto u = normalize_url_for_similarity(raw)) urls[i].insert(*u);
  }
  auto intersects = [](const std::set<std::string>& a,
                       const std::set<std::string>& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
      if (*ia == *ib) return true;
      if (*ia < *ib) ++ia;
      else ++ib;
    }
    return false;
  };
  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] != -1) continue;
    comp[i] = next;
    std::vector<std::size_t> frontier{i};
    while (!frontier.empty()) {
      const std::size_t a = frontier.back();
      frontier.pop_back();
      for (std::size_t b = 0; b < n; ++b) {
        if (comp[b] != -1) continue;
        if (intersects(shingles[a], shingles[b]) || intersects(urls[a], urls[b])) {
          comp[b] = next;
          frontier.push_back(b);
        }
      }
    }
    ++next;
  }
  std::vector<std::set<std::string>> grouped(next);
  for (std::size_t i = 0; i < n; ++i)
    grouped[comp[i]].insert(w.messages[i].message_id);
  std::set<std::set<std::string>> partition;
  for (auto& g : grouped)
    if (g.size() >= min_group_size) partition.insert(std::move(g));
  return partition;
}

Outcome criterion_clustering_oracle() {
  Outcome out;
  std::mt19937_64 rng(0xACCE5504);
  static const char* vocab[] = {"win",    "free",  "gift",  "click", "here",
                                "now",    "sale",  "best",  "price", "today",
                                "simple", "words", "about", "life",  "news",
                                "offer",  "deal",  "watch", "this",  "page"};
  for (int round = 0; round < 200 && out.pass; ++round) {
    const std::size_t n = 2 + rng() % 499;
    ObservationWindow w;
    w.start = 0;
    w.duration = 3600;
    // A few template texts and urls salted through random chatter.
    std::vector<std::string> templates;
    for (int t = 0; t < 4; ++t) {
      std::string text;
      for (int k = 0; k < 5; ++k)
        text += std::string(k ? " " : "") + vocab[rng() % 20];
      templates.push_back(text);
    }
    for (std::size_t i = 0; i < n; ++i) {
      Message m;
      m.message_id = "m" + std::to_string(i);
      m.account_id = "a" + std::to_string(rng() % (n / 2 + 1));
      m.timestamp = 100;
      const int shape = static_cast<int>(rng() % 10);
      if (shape < 3) {
        m.text = templates[rng() % templates.size()];
      } else {
        const int words = static_cast<int>(rng() % 9);
        for (int k = 0; k < words; ++k)
          m.text += std::string(k ? " " : "") + vocab[rng() % 20];
      }
      if (shape >= 2 && shape < 5)
        m.urls.push_back("http://site" + std::to_string(rng() % 5) + ".com/p" +
                         std::to_string(rng() % 4) + "?id=" + std::to_string(i));
      if (shape == 5)
        m.urls.push_back("https://www.youtube.com/watch?v=" + std::to_string(i));
      w.messages.push_back(std::move(m));
    }

    auto groups = cluster_window(w, 2);
    std::set<std::set<std::string>> got;
    std::set<std::string> seen;
    bool overlap = false;
    for (const auto& g : groups) {
      std::set<std::string> ids;
      for (std::size_t idx : g.members) {
        ids.insert(w.messages[idx].message_id);
        if (!seen.insert(w.messages[idx].message_id).second) overlap = true;
      }
      got.insert(std::move(ids));
    }
    out.require(!overlap, "a message appeared in two groups");
    if (got != oracle_partition(w, 2)) {
      out.require(false,
                  "partition mismatch on window " + std::to_string(round) +
                      " (n=" + std::to_string(n) + ")");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// 5. Time smoothing conserves total mass.

Outcome criterion_smoothing_mass() {
  Outcome out;
  std::mt19937_64 rng(0xACCE5505);
  for (int round = 0; round < 1000; ++round) {
    FeatureModel model;
    model.kind = FeatureKind::TimeOfDay;
    double raw_sum = 0.0;
    for (int h = 0; h < 24; ++h) {
      if (rng() % 3 == 0) continue;
      char key[4];
      std::snprintf(key, sizeof(key), "%02d", h);
      const std::int64_t c = 1 + static_cast<std::int64_t>(rng() % 100);
      model.entries[key] = c;
      raw_sum += static_cast<double>(c);
    }
    model.total_messages = static_cast<std::int64_t>(raw_sum);
    smooth_time_model(model);
    double smoothed_sum = 0.0;
    for (const auto& [hour, v] : model.smoothed_entries) smoothed_sum += v;
    if (std::abs(smoothed_sum - raw_sum) > 1e-9) {
      out.require(false, "mass not conserved on round " + std::to_string(round));
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// 6. Campaign end to end on a 1,000-account synthetic fixture.

Outcome criterion_campaign_end_to_end() {
  Outcome out;
  TempDir dir;
  SimSpec spec;
  spec.accounts = 1000;
  spec.history_messages_min = 20;
  spec.history_messages_max = 30;
  spec.window_start = *parse_rfc3339("2011-07-15T02:00:00Z");  // off-hours
  spec.window_benign_messages = 400;
  spec.languages = {"en", "de"};
  CampaignSpec campaign;
  campaign.app = "BulkBlaster";
  campaign.template_text = "win a free iphone click here now";
  campaign.url = "http://spam.biz/go?id={n}";
  campaign.victims = 50;
  campaign.stealth = StealthSpec::none();
  spec.campaigns.push_back(campaign);

  {
    std::ofstream hist(dir.file("history.jsonl"));
    std::ofstream stream(dir.file("stream.jsonl"));
    std::ofstream truth(dir.file("truth.jsonl"));
    run_simulate(spec, 20110813, hist, stream, truth);
  }

  std::ostringstream train_report;
  TrainSummary trained = run_train(
      {dir.file("history.jsonl"), dir.file("store"), base_config()}, train_report);
  out.require(trained.trained == 1000, "expected 1000 trained profiles");

  DetectRun run;
  run.opts = {dir.file("stream.jsonl"), dir.file("store"), "", ""};
  run.cfg = base_config();
  std::ostringstream report;
  const auto t0 = Clock::now();
  DetectSummaryCounts counts = run_detect(run, report);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();

  std::set<std::string> victims;
  std::set<std::string> victim_messages;
  for (const auto& t : parse_jsonl(slurp(dir.file("truth.jsonl")))) {
    victims.insert(t["account_id"].get<std::string>());
    victim_messages.insert(t["message_id"].get<std::string>());
  }

  std::set<std::string> flagged;
  bool campaign_group_flagged = false;
  for (const auto& line : parse_jsonl(report.str())) {
    if (!line.contains("compromised") || line["compromised"] != true) continue;
    for (const auto& a : line["flagged_accounts"])
      flagged.insert(a.get<std::string>());
    std::size_t campaign_members = 0;
    for (const auto& member : line["members"])
      if (victim_messages.count(member["message_id"].get<std::string>()))
        ++campaign_members;
    if (campaign_members * 10 >= victim_messages.size() * 9)
      campaign_group_flagged = true;
  }

  std::size_t victims_flagged = 0;
  for (const auto& v : victims) victims_flagged += flagged.count(v);
  std::size_t benign_flagged = 0;
  for (const auto& f : flagged) benign_flagged += victims.count(f) ? 0 : 1;
  const std::size_t benign_total = spec.accounts - victims.size();

  out.require(counts.exit_code == kExitDetections, "detect exit code not 1");
  out.require(campaign_group_flagged, "campaign group not flagged");
  out.require(victims_flagged * 10 >= victims.size() * 9,
              "victims flagged " + std::to_string(victims_flagged) + "/50");
  out.require(benign_flagged * 20 <= benign_total,
              std::to_string(benign_flagged) + " benign accounts flagged");
  out.require(secs < 600.0, "took too long");
  out.detail = std::to_string(victims_flagged) + "/50 victims, " +
               std::to_string(benign_flagged) + "/" +
               std::to_string(benign_total) + " benign flagged";
  return out;
}

// ---------------------------------------------------------------------------
// 7. High-profile replay: consistent accounts with one deviant message.

std::string fixture_line(const std::string& id, const std::string& account,
                         const std::string& ts, const std::string& source,
                         const std::string& text,
                         const std::vector<std::string>& urls,
                         const std::vector<std::string>& mentions) {
  json j{{"message_id", id},   {"account_id", account}, {"timestamp", ts},
         {"source_app", source}, {"text", text},        {"urls", urls},
         {"mentions", mentions}, {"hashtags", json::array()}};
  return j.dump() + "\n";
}

Outcome criterion_high_profile_replay() {
  Outcome out;
  TempDir dir;

  struct Account {
    std::string id;
    std::string source;
    std::string domain;
  };
  const std::vector<Account> accounts = {
      {"newswire", "FlowPublisher", "newswire.example.com"},
      {"cablenews", "DeskSuite", "cablenews.example.com"},
      {"galaxyvoip", "StudioPanel", "galaxyvoip.example.com"},
      {"portalnews", "CastDeck", "portalnews.example.com"},
  };

  // Stable histories: one source, a link in every message, business hours,
  // English text, mentions only occasionally.
  std::string history;
  for (const auto& acct : accounts) {
    for (int i = 0; i < 30; ++i) {
      char ts[40];
      std::snprintf(ts, sizeof(ts), "2013-04-%02dT%02d:%02d:00Z", 1 + i % 20,
                    9 + i % 9, i % 60);
      history += fixture_line(
          acct.id + "-h" + std::to_string(i), acct.id, ts, acct.source,
          "the daily report is ready with all the morning numbers",
          {"http://" + acct.domain + "/story/" + std::to_string(i)},
          i % 10 < 2 ? std::vector<std::string>{"editor"}
                     : std::vector<std::string>{});
    }
  }
  // A Chipotle-style account: same source always, mentions almost always.
  for (int i = 0; i < 30; ++i) {
    char ts[40];
    std::snprintf(ts, sizeof(ts), "2013-07-%02dT%02d:%02d:00Z", 1 + i % 20,
                  9 + i % 9, i % 60);
    history += fixture_line(
        "grillchain-h" + std::to_string(i), "grillchain", ts, "EngageSuite",
        "thanks for visiting come back soon for more great food",
        i % 2 ? std::vector<std::string>{"http://grillchain.example.com/menu"}
              : std::vector<std::string>{},
        i % 10 < 9 ? std::vector<std::string>{"fan" + std::to_string(i % 3)}
                   : std::vector<std::string>{});
  }
  {
    std::ofstream h(dir.file("history.jsonl"));
    h << history;
  }
  std::ostringstream train_report;
  run_train({dir.file("history.jsonl"), dir.file("store"), base_config()},
            train_report);

  // One message per account deviating in source, link domain and mention;
  // hour and language stay habitual.
  std::string probes;
  for (const auto& acct : accounts)
    probes += fixture_line(acct.id + "-attack", acct.id,
                           "2013-04-23T10:07:00Z", "Web Portal",
                           "something important happened a moment ago",
                           {"http://shady.example.biz/x"}, {"operator99"});
  // Twelve messages deviating only in the mention target.
  for (int i = 0; i < 12; ++i)
    probes += fixture_line("grillchain-p" + std::to_string(i), "grillchain",
                           "2013-07-21T10:30:00Z", "EngageSuite",
                           "thanks for visiting come back soon for more great food",
                           {"http://grillchain.example.com/menu"},
                           {"promoteam"});
  {
    std::ofstream p(dir.file("probes.jsonl"));
    p << probes;
  }

  std::ostringstream report;
  ScoreSummary summary = run_score(
      {dir.file("probes.jsonl"), dir.file("store"), base_config()}, report);

  std::size_t attacks_flagged = 0;
  std::size_t lookalike_flagged = 0;
  for (const auto& line : parse_jsonl(report.str())) {
    if (!line.contains("message_id")) continue;
    const std::string id = line["message_id"].get<std::string>();
    const bool violates = line.value("violates_profile", false);
    if (id.ends_with("-attack") && violates) ++attacks_flagged;
    if (id.rfind("grillchain-p", 0) == 0 && violates) ++lookalike_flagged;
  }
  out.require(summary.evaluated == 16, "not all probes were evaluable");
  out.require(attacks_flagged == 4,
              "only " + std::to_string(attacks_flagged) + "/4 deviant messages flagged");
  out.require(lookalike_flagged == 0,
              std::to_string(lookalike_flagged) +
                  " mention-only messages wrongly flagged");
  out.detail = "4/4 flagged, 12 mention-only messages clean";
  return out;
}

// ---------------------------------------------------------------------------
// 8. Bulk vs client classification against a reference edit distance.

std::size_t reference_edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t best = std::min(d[i - 1][j], d[i][j - 1]) + 1;
      best = std::min(best, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1));
      d[i][j] = best;
    }
  return d[a.size()][b.size()];
}

Outcome criterion_bulk_classification() {
  Outcome out;
  std::vector<std::string> identical(10, "your order has shipped and is on the way");
  out.require(classify_application(identical) == AppClass::Bulk,
              "identical templates not classified bulk");

  std::mt19937_64 rng(0xACCE5508);
  std::vector<std::string> random_texts;
  for (int i = 0; i < 10; ++i) {
    std::string s;
    for (int k = 0; k < 100; ++k)
      s.push_back(static_cast<char>('a' + rng() % 26));
    random_texts.push_back(std::move(s));
  }
  double sum = 0.0;
  int pairs = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      sum += 1.0 -
             static_cast<double>(reference_edit_distance(random_texts[i],
                                                         random_texts[j])) /
                 100.0;
      ++pairs;
    }
  const double mean = sum / pairs;
  out.require(mean < 0.35, "reference mean ratio unexpectedly high");
  out.require(classify_application(random_texts) == AppClass::Client,
              "random strings not classified client");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "reference mean ratio %.3f", mean);
  out.detail = buf;
  return out;
}

// ---------------------------------------------------------------------------
// 9. Determinism: identical fixture and seed give byte-identical reports.

Outcome criterion_determinism() {
  Outcome out;
  TempDir dir;
  SimSpec spec;
  spec.accounts = 300;
  spec.window_start = *parse_rfc3339("2011-07-15T02:00:00Z");
  spec.window_benign_messages = 150;
  spec.languages = {"en", "de"};
  CampaignSpec campaign;
  campaign.victims = 30;
  campaign.url = "http://spam.biz/go?id={n}";
  spec.campaigns.push_back(campaign);

  {
    std::ofstream hist(dir.file("history.jsonl"));
    std::ofstream stream(dir.file("stream.jsonl"));
    std::ofstream truth(dir.file("truth.jsonl"));
    run_simulate(spec, 5, hist, stream, truth);
  }
  // Simulation itself must be byte-stable too.
  {
    std::ofstream hist(dir.file("history2.jsonl"));
    std::ofstream stream(dir.file("stream2.jsonl"));
    std::ofstream truth(dir.file("truth2.jsonl"));
    run_simulate(spec, 5, hist, stream, truth);
  }
  out.require(slurp(dir.file("stream.jsonl")) == slurp(dir.file("stream2.jsonl")),
              "simulate streams differ");
  out.require(slurp(dir.file("truth.jsonl")) == slurp(dir.file("truth2.jsonl")),
              "simulate truth files differ");

  // History-backed detection: no store state at all.
  DetectRun run;
  run.opts = {dir.file("stream.jsonl"), "", dir.file("history.jsonl"), ""};
  run.cfg = base_config();
  run.cfg.seed = 9;
  std::ostringstream r1, r2;
  run_detect(run, r1);
  run_detect(run, r2);
  out.require(r1.str() == r2.str(), "history-mode reports differ");

  // Store-backed detection from identical fresh stores.
  std::ostringstream train_report;
  run_train({dir.file("history.jsonl"), dir.file("storeA"), base_config()},
            train_report);
  fs::copy(dir.file("storeA"), dir.file("storeB"), fs::copy_options::recursive);
  DetectRun runA = run;
  runA.opts = {dir.file("stream.jsonl"), dir.file("storeA"), "", ""};
  DetectRun runB = run;
  runB.opts = {dir.file("stream.jsonl"), dir.file("storeB"), "", ""};
  std::ostringstream rA, rB;
  run_detect(runA, rA);
  run_detect(runB, rB);
  out.require(rA.str() == rB.str(), "store-mode reports differ");
  out.require(!rA.str().empty(), "empty report");
  return out;
}

// ---------------------------------------------------------------------------
// 10. Throughput: a 100,000-message window through detect in under 60 s.

Outcome criterion_throughput() {
  Outcome out;
  TempDir dir;
  SimSpec spec;
  spec.accounts = 4000;
  spec.history_messages_min = 20;
  spec.history_messages_max = 24;
  spec.window_start = *parse_rfc3339("2011-07-15T12:00:00Z");
  spec.window_benign_messages = 99950;
  spec.languages = {"en", "de"};
  CampaignSpec campaign;
  campaign.app = "BulkBlaster";
  campaign.template_text = "win a free iphone click here now";
  campaign.url = "http://spam.biz/go?id={n}";
  campaign.victims = 50;
  spec.campaigns.push_back(campaign);

  {
    std::ofstream hist(dir.file("history.jsonl"));
    std::ofstream stream(dir.file("stream.jsonl"));
    std::ofstream truth(dir.file("truth.jsonl"));
    run_simulate(spec, 99, hist, stream, truth);
  }
  std::ostringstream train_report;
  TrainSummary trained = run_train(
      {dir.file("history.jsonl"), dir.file("store"), base_config()}, train_report);
  out.require(trained.trained == 4000, "expected 4000 trained profiles");

  DetectRun run;
  run.opts = {dir.file("stream.jsonl"), dir.file("store"), "", ""};
  run.cfg = base_config();
  const auto t0 = Clock::now();
  std::ofstream report(dir.file("report.jsonl"));
  DetectSummaryCounts counts = run_detect(run, report);
  report.close();
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();

  out.require(counts.messages == 100000, "window did not contain 100k messages");
  out.require(counts.windows == 1, "expected a single window");
  out.require(secs < 60.0, "detect took " + std::to_string(secs) + " s");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f s for 100k messages", secs);
  out.detail = buf;
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"worked-example fidelity", criterion_worked_example},
      {"group threshold function", criterion_threshold_function},
      {"scoring invariant suite (10k pairs)", criterion_scoring_invariants},
      {"clustering oracle equivalence (200 windows)", criterion_clustering_oracle},
      {"smoothing mass conservation (1k histograms)", criterion_smoothing_mass},
      {"campaign end-to-end (1k accounts)", criterion_campaign_end_to_end},
      {"high-profile replay", criterion_high_profile_replay},
      {"bulk application classification", criterion_bulk_classification},
      {"detect determinism", criterion_determinism},
      {"throughput (100k-message window)", criterion_throughput},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%2zu] %-46s %s%s%s  (%.1fs)\n", i + 1, criteria[i].name,
                out.pass ? "PASS" : "FAIL", out.detail.empty() ? "" : " - ",
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures) std::printf("%d criteria FAILED\n", failures);
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
