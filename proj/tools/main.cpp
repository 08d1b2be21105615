// Command-line front end: synth | extract | select | train | report.
//
// Configuration comes from an optional flat key = value file (--config);
// command-line flags override file values. Exit codes: 0 success, 2 input or
// validation error, 3 solver precondition error.

#include <cstdint>
#include <deque>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qubosel/config.hpp"
#include "qubosel/errors.hpp"
#include "qubosel/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitSolverPrecondition = 3;

// One key = value override taken from a flag; applied on top of the config
// file so that flags always win.
struct Override {
  std::string key;
  std::optional<std::string> value;

  void apply(qubosel::PipelineConfig& cfg) const {
    if (value.has_value()) qubosel::apply_config_entry(cfg, key, *value, "--" + key);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QUBO-based feature selection over address transaction histories"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "flat key = value config file");

  // Every flag lands in an Override so file/flag precedence stays in one
  // place. CLI11 only fills the optional when the flag is present. A deque
  // keeps the bound references stable as entries are added.
  std::deque<Override> overrides;
  const auto add = [&](CLI::App* cmd, const std::string& flag, const std::string& key,
                       const std::string& help) {
    overrides.push_back({key, std::nullopt});
    cmd->add_option(flag, overrides.back().value, help);
  };

  add(&app, "--seed", "seed", "global random seed (default 0)");
  add(&app, "--threads", "threads", "worker thread cap (default 1)");
  add(&app, "--out", "out", "output directory (default out)");

  CLI::App* synth = app.add_subcommand(
      "synth", "generate a labeled synthetic dataset (transactions, labels, rates)");
  add(synth, "--addresses-per-class", "addresses_per_class", "addresses per class");
  add(synth, "--tx-count-min", "tx_count_min", "minimum transactions per address");
  add(synth, "--tx-count-max", "tx_count_max", "maximum transactions per address");
  add(synth, "--class-separation", "class_separation",
      "minimum standardized effect size of planted features");
  add(synth, "--planted", "planted_features",
      "comma-separated canonical feature names to plant");

  CLI::App* extract = app.add_subcommand(
      "extract", "summarize transaction histories into the feature matrix CSV");
  add(extract, "--transactions", "transactions", "transactions JSONL path");
  add(extract, "--labels", "labels", "labels CSV path");
  add(extract, "--rates", "rates", "daily USD/BTC rates CSV path");
  add(extract, "--history-cap", "history_cap", "keep the earliest N transactions");

  CLI::App* select = app.add_subcommand(
      "select", "select features by QUBO energy minimization");
  std::string select_matrix;
  select->add_option("--matrix", select_matrix,
                     "feature CSV (default <out>/features.csv)");
  add(select, "--alpha", "alpha", "influence/redundancy trade-off in [0,1]");
  add(select, "--solver", "solver", "sa | exhaustive | subset");
  add(select, "--subset", "subset", "named-subset file for solver=subset");
  add(select, "--target-class", "target_class", "one-vs-rest positive class");
  add(select, "--beta-start", "beta_start", "initial inverse temperature");
  add(select, "--beta-end", "beta_end", "final inverse temperature");
  add(select, "--sweeps", "sweeps", "sweeps per restart");
  add(select, "--restarts", "restarts", "independent annealing restarts");

  CLI::App* train = app.add_subcommand(
      "train", "cross-validate a random forest on a feature mask");
  std::string train_matrix;
  std::string train_selection = "full";
  train->add_option("--matrix", train_matrix,
                    "feature CSV (default <out>/features.csv)");
  train->add_option("--selection", train_selection,
                    "selection JSON path, or 'full' for all features");
  add(train, "--target-class", "target_class", "one-vs-rest positive class");
  add(train, "--folds", "folds", "cross-validation folds (default 10)");
  add(train, "--trees", "n_trees", "trees in the forest (default 100)");
  add(train, "--max-depth", "max_depth", "tree depth cap, 0 = unlimited");
  add(train, "--min-samples-split", "min_samples_split",
      "minimum node size to split (default 2)");
  add(train, "--features-per-split", "features_per_split",
      "candidate features per split: sqrt or a count");
  add(train, "--bootstrap", "bootstrap", "bootstrap resampling: true | false");

  CLI::App* report = app.add_subcommand(
      "report", "consolidate metrics_*.json into a comparison table");

  // Let --config/--seed/--threads/--out appear after the subcommand name.
  for (CLI::App* sub : {synth, extract, select, train, report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    qubosel::PipelineConfig cfg;
    if (config_path.has_value()) cfg = qubosel::load_config(*config_path);
    for (const Override& override_entry : overrides) override_entry.apply(cfg);

    const std::string default_matrix = cfg.out_dir + "/" + qubosel::kFeaturesFile;
    if (synth->parsed()) {
      qubosel::cmd_synth(cfg, std::cout);
    } else if (extract->parsed()) {
      qubosel::cmd_extract(cfg, std::cout);
    } else if (select->parsed()) {
      qubosel::cmd_select(cfg, select_matrix.empty() ? default_matrix : select_matrix,
                          std::cout);
    } else if (train->parsed()) {
      qubosel::cmd_train(cfg, train_matrix.empty() ? default_matrix : train_matrix,
                         train_selection, std::cout);
    } else if (report->parsed()) {
      qubosel::cmd_report(cfg, std::cout);
    }
    return kExitOk;
  } catch (const qubosel::SolverPreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
