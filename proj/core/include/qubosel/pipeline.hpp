#pragma once

#include <iosfwd>
#include <string>

#include "qubosel/config.hpp"

namespace qubosel {

// The five CLI commands as library entry points, so tests can run the full
// pipeline in-process. Each command writes its artifacts under cfg.out_dir
// (created on demand), logs a short summary to `log`, and reports failures
// by throwing (the CLI maps qubosel::Error to exit 2 and
// SolverPreconditionError to exit 3).

// Fixed artifact names under cfg.out_dir.
inline constexpr const char* kTransactionsFile = "transactions.jsonl";
inline constexpr const char* kLabelsFile = "labels.csv";
inline constexpr const char* kRatesFile = "rates.csv";
inline constexpr const char* kFeaturesFile = "features.csv";
inline constexpr const char* kReportTextFile = "report.txt";
inline constexpr const char* kReportJsonFile = "report.json";

// Name of the selection artifact cmd_select writes for this config, e.g.
// "selection_sa.json" or "selection_subset_qa_top9.json".
std::string selection_filename(const PipelineConfig& cfg);

// Short run label a selection or metrics artifact is filed under: "full",
// "sa", "exhaustive" or "subset_<stem>"; for cmd_train it doubles as the
// metrics mask_source field.
std::string mask_source_of_selection(const std::string& selection_path);

// Generates the synthetic dataset (global seed; default planted features
// when the config lists none) and writes transactions.jsonl, labels.csv and
// rates.csv into cfg.out_dir.
void cmd_synth(const PipelineConfig& cfg, std::ostream& log);

// Loads cfg.transactions/labels/rates, builds capped histories and writes
// the canonical feature CSV to cfg.out_dir/features.csv.
void cmd_extract(const PipelineConfig& cfg, std::ostream& log);

// Loads a feature CSV, builds correlations and the QUBO at cfg.alpha, runs
// the configured solver and writes the selection JSON.
void cmd_select(const PipelineConfig& cfg, const std::string& matrix_csv,
                std::ostream& log);

// Cross-validates a random forest on the masked matrix. `selection` is a
// selection JSON path or the literal "full" for the all-ones mask. Writes
// metrics_<source>.json, roc_<source>.csv and importances_<source>.csv
// (importances come from one final fit on all rows).
void cmd_train(const PipelineConfig& cfg, const std::string& matrix_csv,
               const std::string& selection, std::ostream& log);

// Consolidates every metrics_*.json in cfg.out_dir into report.txt and
// report.json, rows sorted by mask_source. Throws when none are present.
void cmd_report(const PipelineConfig& cfg, std::ostream& log);

}  // namespace qubosel
