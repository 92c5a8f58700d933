#include "vigil/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vigil/builder.hpp"
#include "vigil/campaign.hpp"
#include "vigil/clustering.hpp"
#include "vigil/store.hpp"

namespace vigil {

namespace {

std::unique_ptr<LanguageClassifier> make_classifier(const PipelineConfig& cfg) {
  std::string dir = cfg.corpus_dir.empty() ? default_corpus_dir() : cfg.corpus_dir;
  if (dir.empty() || !std::filesystem::is_directory(dir))
    return nullptr;  // language falls back to "und" everywhere
  return std::make_unique<LanguageClassifier>(
      LanguageClassifier::from_corpus_dir(dir));
}

std::set<std::string> load_allow_list(const std::string& path) {
  std::set<std::string> allow;
  if (path.empty()) return allow;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open allow-list " + path);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (!line.empty() && line[0] != '#') allow.insert(line);
  }
  return allow;
}

// Account streams grouped and sorted chronologically (stable on ties).
std::map<std::string, std::vector<Message>> group_by_account(
    std::vector<Message>&& messages) {
  std::map<std::string, std::vector<Message>> streams;
  for (auto& m : messages) streams[m.account_id].push_back(std::move(m));
  for (auto& [account, stream] : streams)
    std::stable_sort(stream.begin(), stream.end(),
                     [](const Message& a, const Message& b) {
                       return a.timestamp < b.timestamp;
                     });
  return streams;
}

// Profiles for detection come from the store or from an account's history
// stream, never from the window under analysis.
class ProfileSource {
 public:
  ProfileSource(const std::string& store_dir, const std::string& history_path,
                const PipelineConfig& cfg, const LanguageClassifier* classifier)
      : cfg_(cfg), classifier_(classifier) {
    if (!store_dir.empty()) store_.emplace(store_dir);
    if (!history_path.empty())
      history_ = group_by_account(
          std::move(read_message_jsonl_file(history_path).messages));
  }

  // nullptr when the account has no profile (unevaluable).
  const BehavioralProfile* get(const std::string& account_id) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(account_id);
    if (it != cache_.end()) return it->second ? &*it->second : nullptr;

    std::optional<BehavioralProfile> profile;
    if (store_) {
      try {
        profile = store_->load(account_id);
      } catch (const CorruptProfileError&) {
        profile.reset();  // treat as missing; the account is unevaluable
      }
    }
    if (!profile) {
      auto h = history_.find(account_id);
      if (h != history_.end())
        profile = build_profile(account_id, h->second, cfg_.min_stream_length,
                                cfg_.tz_offset_for(account_id), classifier_);
    }
    auto [pos, ignored] = cache_.emplace(account_id, std::move(profile));
    return pos->second ? &*pos->second : nullptr;
  }

 private:
  const PipelineConfig& cfg_;
  const LanguageClassifier* classifier_;
  std::optional<ProfileStore> store_;
  std::map<std::string, std::vector<Message>> history_;
  std::mutex mutex_;
  std::map<std::string, std::optional<BehavioralProfile>> cache_;
};

// Deterministic parallel map over [0, count): results land in a vector
// indexed by item, whatever the execution order.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                        8);
  if (workers <= 1 || count < 16) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

TrainSummary run_train(const TrainOptions& opts, std::ostream& report) {
  TrainSummary summary;
  auto read = read_message_jsonl_file(opts.stream_path);
  summary.lines = read.total_lines;
  summary.malformed = read.malformed_lines;

  auto classifier = make_classifier(opts.cfg);
  ProfileStore store(opts.store_dir);

  auto streams = group_by_account(std::move(read.messages));
  std::vector<const std::pair<const std::string, std::vector<Message>>*> items;
  items.reserve(streams.size());
  for (const auto& entry : streams) items.push_back(&entry);

  std::mutex store_mutex;
  std::atomic<std::size_t> trained{0}, skipped{0};
  parallel_for(items.size(), [&](std::size_t i) {
    const auto& [account, stream] = *items[i];
    auto profile =
        build_profile(account, stream, opts.cfg.min_stream_length,
                      opts.cfg.tz_offset_for(account), classifier.get());
    if (!profile) {
      ++skipped;
      return;
    }
    std::lock_guard<std::mutex> lock(store_mutex);
    store.save(*profile);
    ++trained;
  });
  summary.trained = trained;
  summary.skipped_short = skipped;

  if (summary.lines > 0 && summary.malformed == summary.lines)
    summary.exit_code = kExitInputError;

  report << json{{"summary",
                  {{"accounts_trained", summary.trained},
                   {"accounts_skipped_short", summary.skipped_short},
                   {"lines", summary.lines},
                   {"malformed_lines", summary.malformed}}}}
                .dump()
         << "\n";
  return summary;
}

ScoreSummary run_score(const ScoreOptions& opts, std::ostream& report) {
  ScoreSummary summary;
  auto read = read_message_jsonl_file(opts.message_path);
  summary.messages = read.messages.size();
  summary.malformed = read.malformed_lines;

  auto classifier = make_classifier(opts.cfg);
  const FeatureWeights weights = resolve_weights(opts.cfg);
  ProfileSource profiles(opts.store_dir, "", opts.cfg, classifier.get());

  struct AccountTally {
    std::size_t messages = 0;
    std::size_t violations = 0;
  };
  std::map<std::string, AccountTally> per_account;

  std::vector<json> lines(read.messages.size());
  std::vector<int> verdicts(read.messages.size(), -1);  // -1 unevaluable
  parallel_for(read.messages.size(), [&](std::size_t i) {
    const Message& m = read.messages[i];
    const BehavioralProfile* profile = profiles.get(m.account_id);
    if (!profile) {
      lines[i] = json{{"message_id", m.message_id},
                      {"account_id", m.account_id},
                      {"evaluable", false}};
      return;
    }
    MessageScore score = score_message(*profile, m, weights,
                                       opts.cfg.tz_offset_for(m.account_id),
                                       classifier.get());
    verdicts[i] = score.violates_profile ? 1 : 0;
    lines[i] = message_score_to_json(score);
  });

  for (std::size_t i = 0; i < read.messages.size(); ++i) {
    report << lines[i].dump() << "\n";
    auto& tally = per_account[read.messages[i].account_id];
    if (verdicts[i] < 0) {
      ++summary.unevaluable;
      continue;
    }
    ++summary.evaluated;
    ++tally.messages;
    if (verdicts[i] == 1) {
      ++summary.violations;
      ++tally.violations;
    }
  }

  json accounts = json::object();
  for (const auto& [account, tally] : per_account) {
    if (tally.messages == 0) continue;
    accounts[account] = {
        {"messages", tally.messages},
        {"violations", tally.violations},
        {"violation_percent",
         100.0 * static_cast<double>(tally.violations) /
             static_cast<double>(tally.messages)}};
  }
  const double percent =
      summary.evaluated
          ? 100.0 * static_cast<double>(summary.violations) /
                static_cast<double>(summary.evaluated)
          : 0.0;
  report << json{{"summary",
                  {{"messages", summary.messages},
                   {"evaluated", summary.evaluated},
                   {"violations", summary.violations},
                   {"violation_percent", percent},
                   {"unevaluable", summary.unevaluable},
                   {"malformed_lines", summary.malformed},
                   {"accounts", std::move(accounts)}}}}
                .dump()
         << "\n";

  if (summary.messages == 0 && summary.malformed > 0)
    summary.exit_code = kExitInputError;
  else if (summary.violations > 0)
    summary.exit_code = kExitDetections;
  return summary;
}

DetectSummaryCounts run_detect(const DetectRun& run, std::ostream& report) {
  const PipelineConfig& cfg = run.cfg;
  DetectSummaryCounts summary;

  auto read = read_message_jsonl_file(run.opts.stream_path);
  summary.messages = read.messages.size();
  summary.malformed = read.malformed_lines;
  if (read.messages.empty() && read.malformed_lines > 0) {
    summary.exit_code = kExitInputError;
    report << json{{"summary", {{"error", "no parseable input"}}}}.dump() << "\n";
    return summary;
  }

  auto classifier = make_classifier(cfg);
  const FeatureWeights weights = resolve_weights(cfg);
  const std::set<std::string> allow_list = load_allow_list(cfg.allow_list_path);
  ProfileSource profiles(run.opts.store_dir, run.opts.history_path, cfg,
                         classifier.get());

  const std::string registry_path =
      run.opts.store_dir.empty()
          ? std::string()
          : (std::filesystem::path(run.opts.store_dir) / "app_registry.json")
                .string();
  ApplicationRegistry registry =
      registry_path.empty()
          ? ApplicationRegistry(cfg.seed, cfg.app_sample_size)
          : ApplicationRegistry::load_or_empty(registry_path, cfg.seed,
                                               cfg.app_sample_size);

  // Tumbling windows aligned to the epoch.
  std::map<Instant, ObservationWindow> windows;
  for (auto& m : read.messages) {
    Instant start = (m.timestamp / cfg.window_seconds) * cfg.window_seconds;
    if (m.timestamp < 0 && m.timestamp % cfg.window_seconds != 0)
      start -= cfg.window_seconds;
    auto& w = windows[start];
    w.start = start;
    w.duration = cfg.window_seconds;
    w.messages.push_back(std::move(m));
  }

  std::ofstream dump_groups;
  if (!run.opts.dump_groups_path.empty()) {
    dump_groups.open(run.opts.dump_groups_path, std::ios::trunc);
    if (!dump_groups)
      throw std::runtime_error("cannot write " + run.opts.dump_groups_path);
  }

  const JudgeParams judge_params{cfg.group_threshold_k, cfg.group_threshold_d,
                                 cfg.group_threshold_floor,
                                 cfg.levenshtein_cutoff, cfg.popularity_cutoff};
  std::set<std::string> flagged_accounts;

  for (auto& [start, window] : windows) {
    ++summary.windows;
    // Chronological member order inside the window; group member indices
    // then enumerate messages in time order.
    std::sort(window.messages.begin(), window.messages.end(),
              [](const Message& a, const Message& b) {
                if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                return a.message_id < b.message_id;
              });
    for (const Message& m : window.messages) registry.ingest(m);

    std::vector<MessageGroup> groups = cluster_window(window, cfg.min_group_size);
    for (auto& g : groups)
      g.group_id = "w" + std::to_string(start) + "-" + g.group_id;

    if (dump_groups.is_open()) {
      for (const auto& g : groups) {
        json ids = json::array();
        for (std::size_t idx : g.members)
          ids.push_back(window.messages[idx].message_id);
        dump_groups << json{{"group_id", g.group_id},
                            {"kind", similarity_kind_name(g.kind)},
                            {"key", g.key},
                            {"n", g.size()},
                            {"message_ids", std::move(ids)}}
                           .dump()
                    << "\n";
      }
    }

    // Groups are evaluated largest-first until the per-window profile
    // budget runs out; cluster_window already emits them in that order.
    std::vector<std::vector<std::optional<MessageScore>>> all_scores(
        groups.size());
    std::vector<bool> allow_listed(groups.size(), false);
    std::vector<bool> evaluated_group(groups.size(), false);

    std::unordered_set<std::string> budget_accounts;
    auto charge_budget = [&](const std::string& account) {
      if (cfg.budget <= 0) return true;
      if (budget_accounts.count(account)) return true;
      if (std::cmp_less(budget_accounts.size(), cfg.budget)) {
        budget_accounts.insert(account);
        return true;
      }
      return false;
    };

    std::vector<std::size_t> to_score;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const MessageGroup& g = groups[gi];
      all_scores[gi].resize(g.size());
      if (allow_list.count(predominant_application(g, window))) {
        allow_listed[gi] = true;
        continue;
      }
      if (cfg.budget > 0) {
        bool any = false;
        for (std::size_t idx : g.members)
          if (charge_budget(window.messages[idx].account_id)) any = true;
        if (!any) continue;  // budget exhausted, group stays unevaluated
      }
      evaluated_group[gi] = true;
      to_score.push_back(gi);
    }

    parallel_for(to_score.size(), [&](std::size_t k) {
      const std::size_t gi = to_score[k];
      const MessageGroup& g = groups[gi];
      for (std::size_t mi = 0; mi < g.members.size(); ++mi) {
        const Message& m = window.messages[g.members[mi]];
        if (cfg.budget > 0 && !budget_accounts.count(m.account_id)) continue;
        const BehavioralProfile* profile = profiles.get(m.account_id);
        if (!profile) continue;
        all_scores[gi][mi] =
            score_message(*profile, m, weights,
                          cfg.tz_offset_for(m.account_id), classifier.get());
      }
    });

    // Violations feed the application registry before any verdicts, in
    // chronological order across the whole window.
    std::vector<std::pair<Instant, const Message*>> violating;
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
      for (std::size_t mi = 0; mi < groups[gi].members.size(); ++mi)
        if (all_scores[gi][mi] && all_scores[gi][mi]->violates_profile) {
          const Message& m = window.messages[groups[gi].members[mi]];
          violating.emplace_back(m.timestamp, &m);
        }
    std::sort(violating.begin(), violating.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return a.second->message_id < b.second->message_id;
              });
    for (const auto& [ts, m] : violating)
      registry.record_violation(m->source_app, ts);

    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const MessageGroup& g = groups[gi];
      GroupVerdict verdict =
          judge_group(g, window, all_scores[gi], registry, judge_params);
      if (allow_listed[gi]) {
        verdict.note = "allow_listed";
        verdict.compromised = false;
        verdict.flagged_accounts.clear();
      }
      ++summary.groups_total;
      if (verdict.compromised) {
        ++summary.groups_compromised;
        flagged_accounts.insert(verdict.flagged_accounts.begin(),
                                verdict.flagged_accounts.end());
      }

      json members = json::array();
      for (std::size_t mi = 0; mi < g.members.size(); ++mi) {
        const Message& m = window.messages[g.members[mi]];
        if (all_scores[gi][mi]) {
          json line = message_score_to_json(*all_scores[gi][mi]);
          members.push_back(std::move(line));
        } else {
          members.push_back(json{{"message_id", m.message_id},
                                 {"account_id", m.account_id},
                                 {"evaluable", false}});
        }
      }
      json vj;
      vj["group_id"] = verdict.group_id;
      vj["window_start"] = format_rfc3339(start);
      vj["kind"] = similarity_kind_name(g.kind);
      vj["key"] = g.key;
      vj["n"] = verdict.n;
      vj["evaluated"] = verdict.evaluated;
      vj["violations"] = verdict.violations;
      vj["fraction"] = verdict.fraction;
      vj["threshold"] = verdict.threshold;
      vj["predominant_app"] = verdict.predominant_app;
      vj["app_class"] = app_class_name(verdict.app_class);
      vj["app_popular"] = verdict.app_popular;
      vj["compromised"] = verdict.compromised;
      if (!verdict.note.empty()) vj["note"] = verdict.note;
      vj["flagged_accounts"] = verdict.flagged_accounts;
      vj["members"] = std::move(members);
      report << vj.dump() << "\n";
    }
  }

  if (!registry_path.empty()) registry.save(registry_path);

  summary.accounts_flagged = flagged_accounts.size();
  report << json{{"summary",
                  {{"messages", summary.messages},
                   {"malformed_lines", summary.malformed},
                   {"windows", summary.windows},
                   {"groups_total", summary.groups_total},
                   {"groups_compromised", summary.groups_compromised},
                   {"accounts_flagged", summary.accounts_flagged},
                   {"flagged_accounts",
                    std::vector<std::string>(flagged_accounts.begin(),
                                             flagged_accounts.end())}}}}
                .dump()
         << "\n";
  if (summary.groups_compromised > 0) summary.exit_code = kExitDetections;
  return summary;
}

}  // namespace vigil
