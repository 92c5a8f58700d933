#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vigil/clustering.hpp"
#include "vigil/json.hpp"
#include "vigil/scoring.hpp"

namespace vigil {

// Violation-fraction threshold for a group of n similar messages:
// max(floor, k*n + d). Small groups need near-unanimous violations, large
// groups only the floor fraction.
double group_threshold(std::size_t n, double k = -0.005, double d = 0.82,
                       double floor = 0.1);

std::size_t levenshtein_distance(const std::string& a, const std::string& b);

// 1 - editdistance/max(len), in [0, 1]; 1 for two empty strings.
double levenshtein_ratio(const std::string& a, const std::string& b);

enum class AppClass { Client, Bulk };
const char* app_class_name(AppClass c);

// Bulk when the sampled messages look template-generated: mean pairwise
// Levenshtein ratio at or above the cutoff. Fewer than two samples default
// to Client.
AppClass classify_application(const std::vector<std::string>& samples,
                              double cutoff = 0.35);

struct ApplicationStats {
  std::string app;
  Instant first_seen = 0;
  std::optional<Instant> first_violation;
  // First use per account in chronological order; supports counting the
  // distinct accounts active before the first violation.
  std::vector<std::pair<Instant, std::string>> first_uses;
  std::uint64_t messages_seen = 0;
  std::vector<std::string> sampled_messages;

  std::int64_t distinct_accounts_before_first_violation() const;
};

// accounts-before-first-violation x application age in seconds. Applications
// that never violated a profile are vacuously popular (never flaggable).
double popularity_score(const ApplicationStats& stats);
bool is_popular(const ApplicationStats& stats, double cutoff = 1e6);

// Per-application usage statistics accumulated across observation windows.
// Message ingest must be chronological. Sampling is reservoir-style and
// seeded-deterministic.
class ApplicationRegistry {
 public:
  explicit ApplicationRegistry(std::uint64_t seed = 1, int sample_size = 10)
      : seed_(seed), sample_size_(sample_size) {}

  void ingest(const Message& m);
  void record_violation(const std::string& app, Instant at);

  const ApplicationStats* stats(const std::string& app) const;

  json to_json() const;
  static ApplicationRegistry from_json(const json& j, std::uint64_t seed,
                                       int sample_size);
  void save(const std::string& path) const;
  static ApplicationRegistry load_or_empty(const std::string& path,
                                           std::uint64_t seed, int sample_size);

 private:
  std::uint64_t seed_;
  int sample_size_;
  std::map<std::string, ApplicationStats> apps_;
  std::map<std::string, std::set<std::string>> accounts_;
};

struct GroupVerdict {
  std::string group_id;
  std::size_t n = 0;
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  double fraction = 0.0;
  double threshold = 0.0;
  std::string predominant_app;
  AppClass app_class = AppClass::Client;
  bool app_popular = false;
  bool compromised = false;
  std::string note;  // "no_evaluated_members", "allow_listed", or empty
  std::vector<std::string> flagged_accounts;
};

struct JudgeParams {
  double threshold_k = -0.005;
  double threshold_d = 0.82;
  double threshold_floor = 0.1;
  double levenshtein_cutoff = 0.35;
  double popularity_cutoff = 1e6;
};

// Decides whether a group of similar messages is a compromise campaign.
// member_scores runs parallel to group.members; unevaluable members (no
// profile) carry nullopt and are excluded from the fraction. Flagged
// accounts are the owners of violating messages in a compromised group.
GroupVerdict judge_group(
    const MessageGroup& group, const ObservationWindow& window,
    const std::vector<std::optional<MessageScore>>& member_scores,
    const ApplicationRegistry& registry, const JudgeParams& params = {});

// Most frequent source application among members; ties break to the
// lexicographically smallest name.
std::string predominant_application(const MessageGroup& group,
                                    const ObservationWindow& window);

}  // namespace vigil
