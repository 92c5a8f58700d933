// vigil - behavioral anomaly detection for social account message streams.
//
// Subcommands:
//   train         build behavioral profiles from a JSONL message stream
//   score         score messages against stored profiles
//   detect        window + cluster a stream and flag compromise campaigns
//   simulate      generate a synthetic labeled stream from a spec file
//   show-profile  print one stored profile

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "vigil/pipeline.hpp"
#include "vigil/simulate.hpp"
#include "vigil/store.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string store_dir = "vigil-store";
  std::string out_path;
  std::optional<std::int64_t> window_seconds;
  std::optional<std::string> weights_preset;
  std::optional<double> threshold;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> allow_list;
  std::optional<std::int64_t> budget;
  std::optional<std::string> corpus_dir;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--store", flags.store_dir, "profile store directory");
  cmd->add_option("--out", flags.out_path, "write output here instead of stdout");
  cmd->add_option("--window-seconds", flags.window_seconds,
                  "observation window length");
  cmd->add_option("--weights-preset", flags.weights_preset,
                  "feature weight preset: twitter or facebook");
  cmd->add_option("--threshold", flags.threshold,
                  "profile violation threshold in [0,1]");
  cmd->add_option("--seed", flags.seed, "RNG seed for sampling/simulation");
  cmd->add_option("--allow-list", flags.allow_list,
                  "file of application names to skip, one per line");
  cmd->add_option("--budget", flags.budget,
                  "profile loads per window, 0 = unlimited");
  cmd->add_option("--corpus-dir", flags.corpus_dir,
                  "language corpus directory (<code>.txt files)");
}

vigil::PipelineConfig resolve_config(const CommonFlags& flags) {
  vigil::PipelineConfig cfg;
  if (!flags.config_path.empty())
    cfg = vigil::load_config_file(flags.config_path);
  if (flags.window_seconds) cfg.window_seconds = *flags.window_seconds;
  if (flags.weights_preset) {
    if (*flags.weights_preset != "twitter" && *flags.weights_preset != "facebook")
      throw vigil::ConfigError("unknown weights preset " + *flags.weights_preset);
    cfg.weights_preset = *flags.weights_preset;
  }
  if (flags.threshold) cfg.threshold = *flags.threshold;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.allow_list) cfg.allow_list_path = *flags.allow_list;
  if (flags.budget) cfg.budget = *flags.budget;
  if (flags.corpus_dir) cfg.corpus_dir = *flags.corpus_dir;
  return cfg;
}

// stdout unless --out was given.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::trunc);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"behavioral anomaly detection for social account streams"};
  app.require_subcommand(1);

  CommonFlags train_flags, score_flags, detect_flags, sim_flags, show_flags;
  std::string train_stream, score_stream, detect_stream;
  std::string detect_history, detect_dump_groups;
  std::string sim_spec_path, sim_history_out, sim_truth_out;
  std::string show_account;

  auto* train = app.add_subcommand("train", "build profiles from a stream");
  train->add_option("stream", train_stream, "JSONL message stream")->required();
  add_common_flags(train, train_flags);

  auto* score = app.add_subcommand("score", "score messages against profiles");
  score->add_option("messages", score_stream, "JSONL messages to score")
      ->required();
  add_common_flags(score, score_flags);

  auto* detect = app.add_subcommand("detect", "detect compromise campaigns");
  detect->add_option("stream", detect_stream, "JSONL message stream")->required();
  detect->add_option("--history", detect_history,
                     "JSONL history for on-demand profile building");
  detect->add_option("--dump-groups", detect_dump_groups,
                     "also write the raw message groups to this JSONL file");
  add_common_flags(detect, detect_flags);

  auto* simulate = app.add_subcommand("simulate", "generate a synthetic stream");
  simulate->add_option("spec", sim_spec_path, "simulation spec JSON")->required();
  simulate
      ->add_option("--history-out", sim_history_out,
                   "training history output (default <out>.history.jsonl)");
  simulate->add_option("--truth-out", sim_truth_out,
                       "ground truth output (default <out>.truth.jsonl)");
  add_common_flags(simulate, sim_flags);

  auto* show = app.add_subcommand("show-profile", "print one stored profile");
  show->add_option("account", show_account, "account id")->required();
  add_common_flags(show, show_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      vigil::TrainOptions opts{train_stream, train_flags.store_dir,
                               resolve_config(train_flags)};
      Output out(train_flags.out_path);
      auto summary = vigil::run_train(opts, out.stream());
      std::cerr << "trained " << summary.trained << " profiles, skipped "
                << summary.skipped_short << " short accounts ("
                << summary.malformed << " malformed lines)\n";
      return summary.exit_code;
    }
    if (score->parsed()) {
      vigil::ScoreOptions opts{score_stream, score_flags.store_dir,
                               resolve_config(score_flags)};
      Output out(score_flags.out_path);
      auto summary = vigil::run_score(opts, out.stream());
      const double pct = summary.evaluated
                             ? 100.0 * static_cast<double>(summary.violations) /
                                   static_cast<double>(summary.evaluated)
                             : 0.0;
      std::cerr << summary.violations << "/" << summary.evaluated
                << " messages violate their profile (" << pct << "%), "
                << summary.unevaluable << " unevaluable\n";
      return summary.exit_code;
    }
    if (detect->parsed()) {
      vigil::DetectRun run;
      run.opts = {detect_stream, detect_flags.store_dir, detect_history,
                  detect_dump_groups};
      run.cfg = resolve_config(detect_flags);
      Output out(detect_flags.out_path);
      auto summary = vigil::run_detect(run, out.stream());
      std::cerr << summary.groups_compromised << "/" << summary.groups_total
                << " groups compromised across " << summary.windows
                << " windows, " << summary.accounts_flagged
                << " accounts flagged\n";
      return summary.exit_code;
    }
    if (simulate->parsed()) {
      if (sim_flags.out_path.empty()) {
        std::cerr << "simulate requires --out\n";
        return vigil::kExitInputError;
      }
      vigil::SimSpec spec = vigil::load_sim_spec(sim_spec_path);
      const std::string stem =
          sim_flags.out_path.size() > 6 &&
                  sim_flags.out_path.ends_with(".jsonl")
              ? sim_flags.out_path.substr(0, sim_flags.out_path.size() - 6)
              : sim_flags.out_path;
      if (sim_history_out.empty()) sim_history_out = stem + ".history.jsonl";
      if (sim_truth_out.empty()) sim_truth_out = stem + ".truth.jsonl";

      std::ofstream stream_out(sim_flags.out_path, std::ios::trunc);
      std::ofstream history_out(sim_history_out, std::ios::trunc);
      std::ofstream truth_out(sim_truth_out, std::ios::trunc);
      if (!stream_out || !history_out || !truth_out) {
        std::cerr << "cannot open simulate output files\n";
        return vigil::kExitInputError;
      }
      const std::uint64_t seed = sim_flags.seed.value_or(1);
      auto result =
          vigil::run_simulate(spec, seed, history_out, stream_out, truth_out);
      std::cerr << "wrote " << result.window_messages << " window messages ("
                << result.campaign_messages << " campaign), "
                << result.history_messages << " history messages\n";
      return vigil::kExitClean;
    }
    if (show->parsed()) {
      vigil::ProfileStore store(show_flags.store_dir);
      auto profile = store.load(show_account);
      if (!profile) {
        std::cerr << "no profile for " << show_account << "\n";
        return vigil::kExitInputError;
      }
      Output out(show_flags.out_path);
      out.stream() << vigil::profile_to_json(*profile).dump(2) << "\n";
      return vigil::kExitClean;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return vigil::kExitInputError;
  }
  return vigil::kExitClean;
}
