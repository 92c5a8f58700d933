#include "vigil/campaign.hpp"

#include <algorithm>
#include <fstream>

#include "vigil/language.hpp"

namespace vigil {

double group_threshold(std::size_t n, double k, double d, double floor) {
  return std::max(floor, k * static_cast<double>(n) + d);
}

std::size_t levenshtein_distance(const std::string& a, const std::string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  std::vector<std::size_t> prev(b.size() + 1), curr(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    curr[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, subst});
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

double levenshtein_ratio(const std::string& a, const std::string& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein_distance(a, b)) /
                   static_cast<double>(longest);
}

const char* app_class_name(AppClass c) {
  return c == AppClass::Client ? "client" : "bulk";
}

AppClass classify_application(const std::vector<std::string>& samples,
                              double cutoff) {
  if (samples.size() < 2) return AppClass::Client;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      sum += levenshtein_ratio(samples[i], samples[j]);
      ++pairs;
    }
  return (sum / static_cast<double>(pairs)) >= cutoff ? AppClass::Bulk
                                                      : AppClass::Client;
}

std::int64_t ApplicationStats::distinct_accounts_before_first_violation()
    const {
  if (!first_violation) return static_cast<std::int64_t>(first_uses.size());
  std::int64_t count = 0;
  for (const auto& [ts, account] : first_uses) {
    if (ts >= *first_violation) break;  // first_uses is chronological
    ++count;
  }
  return count;
}

double popularity_score(const ApplicationStats& stats) {
  if (!stats.first_violation) return 0.0;
  const double age =
      static_cast<double>(*stats.first_violation - stats.first_seen);
  return static_cast<double>(stats.distinct_accounts_before_first_violation()) *
         age;
}

bool is_popular(const ApplicationStats& stats, double cutoff) {
  if (!stats.first_violation) return true;  // never violated: trusted
  return popularity_score(stats) > cutoff;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

void ApplicationRegistry::ingest(const Message& m) {
  const std::string& app = m.source_app;
  auto [it, inserted] = apps_.try_emplace(app);
  ApplicationStats& st = it->second;
  if (inserted) {
    st.app = app;
    st.first_seen = m.timestamp;
  } else {
    st.first_seen = std::min(st.first_seen, m.timestamp);
  }
  if (accounts_[app].insert(m.account_id).second)
    st.first_uses.emplace_back(m.timestamp, m.account_id);

  ++st.messages_seen;
  const std::size_t target = static_cast<std::size_t>(sample_size_);
  if (st.sampled_messages.size() < target) {
    st.sampled_messages.push_back(m.text);
  } else {
    // Stateless reservoir step: the slot choice depends only on the seed,
    // the application and the running message ordinal.
    const std::uint64_t r =
        splitmix64(seed_ ^ fnv1a64(app) ^ st.messages_seen);
    const std::uint64_t j = r % st.messages_seen;
    if (j < target) st.sampled_messages[j] = m.text;
  }
}

void ApplicationRegistry::record_violation(const std::string& app, Instant at) {
  auto it = apps_.find(app);
  if (it == apps_.end()) return;
  if (!it->second.first_violation || at < *it->second.first_violation)
    it->second.first_violation = at;
}

const ApplicationStats* ApplicationRegistry::stats(const std::string& app) const {
  auto it = apps_.find(app);
  return it == apps_.end() ? nullptr : &it->second;
}

json ApplicationRegistry::to_json() const {
  json apps = json::object();
  for (const auto& [app, st] : apps_) {
    json first_uses = json::array();
    for (const auto& [ts, account] : st.first_uses)
      first_uses.push_back({ts, account});
    json aj;
    aj["first_seen"] = st.first_seen;
    if (st.first_violation) aj["first_violation"] = *st.first_violation;
    aj["messages_seen"] = st.messages_seen;
    aj["first_uses"] = std::move(first_uses);
    aj["samples"] = st.sampled_messages;
    apps[app] = std::move(aj);
  }
  return json{{"version", 1}, {"apps", std::move(apps)}};
}

ApplicationRegistry ApplicationRegistry::from_json(const json& j,
                                                   std::uint64_t seed,
                                                   int sample_size) {
  ApplicationRegistry reg(seed, sample_size);
  for (const auto& [app, aj] : j.at("apps").items()) {
    ApplicationStats st;
    st.app = app;
    st.first_seen = aj.at("first_seen").get<Instant>();
    if (aj.contains("first_violation"))
      st.first_violation = aj.at("first_violation").get<Instant>();
    st.messages_seen = aj.at("messages_seen").get<std::uint64_t>();
    for (const auto& fu : aj.at("first_uses")) {
      st.first_uses.emplace_back(fu.at(0).get<Instant>(),
                                 fu.at(1).get<std::string>());
      reg.accounts_[app].insert(st.first_uses.back().second);
    }
    st.sampled_messages = aj.at("samples").get<std::vector<std::string>>();
    reg.apps_.emplace(app, std::move(st));
  }
  return reg;
}

void ApplicationRegistry::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write application registry " + path);
  out << to_json().dump() << "\n";
}

ApplicationRegistry ApplicationRegistry::load_or_empty(const std::string& path,
                                                       std::uint64_t seed,
                                                       int sample_size) {
  std::ifstream in(path);
  if (!in) return ApplicationRegistry(seed, sample_size);
  try {
    return from_json(json::parse(in), seed, sample_size);
  } catch (const std::exception&) {
    return ApplicationRegistry(seed, sample_size);
  }
}

std::string predominant_application(const MessageGroup& group,
                                    const ObservationWindow& window) {
  std::map<std::string, std::size_t> counts;
  for (std::size_t idx : group.members)
    ++counts[window.messages[idx].source_app];
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [app, count] : counts) {
    if (count > best_count) {  // map order makes ties lexicographic
      best = app;
      best_count = count;
    }
  }
  return best;
}

GroupVerdict judge_group(
    const MessageGroup& group, const ObservationWindow& window,
    const std::vector<std::optional<MessageScore>>& member_scores,
    const ApplicationRegistry& registry, const JudgeParams& params) {
  GroupVerdict v;
  v.group_id = group.group_id;
  v.n = group.size();
  v.threshold = group_threshold(v.n, params.threshold_k, params.threshold_d,
                                params.threshold_floor);
  v.predominant_app = predominant_application(group, window);

  std::set<std::string> flagged;
  for (std::size_t i = 0; i < group.members.size(); ++i) {
    if (i >= member_scores.size() || !member_scores[i]) continue;
    ++v.evaluated;
    if (member_scores[i]->violates_profile) {
      ++v.violations;
      flagged.insert(window.messages[group.members[i]].account_id);
    }
  }

  const ApplicationStats* stats = registry.stats(v.predominant_app);
  if (stats) {
    v.app_class =
        classify_application(stats->sampled_messages, params.levenshtein_cutoff);
    v.app_popular = is_popular(*stats, params.popularity_cutoff);
  }

  if (v.evaluated == 0) {
    v.note = "no_evaluated_members";
    v.fraction = 0.0;
    v.compromised = false;
    return v;
  }

  v.fraction =
      static_cast<double>(v.violations) / static_cast<double>(v.evaluated);
  const bool suspicious = v.fraction > v.threshold;
  const bool app_allows = v.app_class == AppClass::Client ||
                          (v.app_class == AppClass::Bulk && !v.app_popular);
  v.compromised = suspicious && app_allows;
  if (v.compromised)
    v.flagged_accounts.assign(flagged.begin(), flagged.end());
  return v;
}

}  // namespace vigil
