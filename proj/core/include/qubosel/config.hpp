#pragma once

#include <cstdint>
#include <string>

#include "qubosel/forest.hpp"
#include "qubosel/ingest.hpp"
#include "qubosel/qubo.hpp"

namespace qubosel {

// Everything a pipeline run needs, with the documented defaults. Loaded from
// a flat key = value config file; CLI flags override individual fields
// afterwards.
struct PipelineConfig {
  // input/output paths
  std::string transactions;
  std::string labels;
  std::string rates;
  std::string out_dir = "out";

  AddressClass target_class = kSyntheticTargetClass;

  // selection
  double alpha = 0.5;
  SolverKind solver = SolverKind::SA;
  std::string subset_path;  // required for solver = subset
  AnnealSchedule schedule;

  // training/evaluation
  ForestConfig forest;
  int folds = 10;

  // ingestion
  int history_cap = static_cast<int>(kDefaultHistoryCap);

  // synthetic generation; synth.seed and synth's planted default are applied
  // by the pipeline, not stored here
  SyntheticConfig synth;

  std::uint64_t seed = 0;
  int threads = 1;
};

// Parses one "key = value" assignment into the config; `where` prefixes error
// messages ("file:line"). Throws InvalidConfigError on unknown keys or
// unparseable values. Recognized keys:
//   transactions, labels, rates, out, target_class,
//   alpha, solver (sa|exhaustive|subset), subset,
//   beta_start, beta_end, sweeps, restarts,
//   n_trees, max_depth (0 = unlimited), min_samples_split,
//   features_per_split (sqrt | positive integer), bootstrap,
//   folds, history_cap, seed, threads,
//   addresses_per_class, tx_count_min, tx_count_max,
//   planted_features (comma-separated canonical names), class_separation
void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                        const std::string& value, const std::string& where);

// Loads a flat config file: one key = value per line, '#' comments, blank
// lines ignored, optional quotes around values.
PipelineConfig load_config(const std::string& path);

}  // namespace qubosel
