#pragma once

#include <iosfwd>
#include <string>

#include "vigil/config.hpp"

namespace vigil {

// Exit codes shared by all subcommands: 0 clean, 1 detections present,
// 2 input errors. Shell pipelines branch on findings this way.
inline constexpr int kExitClean = 0;
inline constexpr int kExitDetections = 1;
inline constexpr int kExitInputError = 2;

struct TrainOptions {
  std::string stream_path;
  std::string store_dir;
  PipelineConfig cfg;
};

struct TrainSummary {
  std::size_t lines = 0;
  std::size_t malformed = 0;
  std::size_t trained = 0;
  std::size_t skipped_short = 0;
  int exit_code = kExitClean;
};

// Builds one profile per account with at least S messages and saves it to
// the store. Writes a summary line to `report`.
TrainSummary run_train(const TrainOptions& opts, std::ostream& report);

struct ScoreOptions {
  std::string message_path;
  std::string store_dir;
  PipelineConfig cfg;
};

struct ScoreSummary {
  std::size_t messages = 0;
  std::size_t malformed = 0;
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  std::size_t unevaluable = 0;
  int exit_code = kExitClean;
};

// Scores each message against its stored profile; one JSONL line per
// message plus a trailing summary line with per-account violation rates.
ScoreSummary run_score(const ScoreOptions& opts, std::ostream& report);

struct DetectOptions {
  std::string stream_path;
  std::string store_dir;
  std::string history_path;      // optional: on-demand profile source
  std::string dump_groups_path;  // optional: write group JSONL here
};

struct DetectSummaryCounts {
  std::size_t messages = 0;
  std::size_t malformed = 0;
  std::size_t windows = 0;
  std::size_t groups_total = 0;
  std::size_t groups_compromised = 0;
  std::size_t accounts_flagged = 0;
  int exit_code = kExitClean;
};

struct DetectRun {
  DetectOptions opts;
  PipelineConfig cfg;
};

// Windows the stream, clusters each window, scores group members against
// their profiles and judges groups. Emits one GroupVerdict JSONL line per
// group (windows ascending, then size descending) plus a summary line.
DetectSummaryCounts run_detect(const DetectRun& run, std::ostream& report);

}  // namespace vigil
