#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qubosel/features.hpp"
#include "qubosel/forest.hpp"
#include "qubosel/ingest.hpp"
#include "qubosel/qubo.hpp"

namespace qubosel {

// All writers below replace the target atomically (temp file + rename) so a
// crashed run never leaves a truncated artifact, and rewrite byte-identical
// content for identical inputs.
void write_text_atomic(const std::string& path, const std::string& content);

// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_text(const std::string& path);

// --- feature matrix CSV -----------------------------------------------------
// Header "address,label,<69 canonical names>", one row per address, feature
// values rendered with 12 significant digits.

void write_feature_csv(const std::string& path, const FeatureTable& table);
FeatureTable read_feature_csv(const std::string& path);

// --- selection result JSON --------------------------------------------------
// {solver, alpha, seed, schedule{beta_start,beta_end,sweeps,restarts}, energy,
//  wall_time_seconds, selected:[names], mask:"0/1 string"}

std::string selection_to_json(const SelectionResult& result);
void write_selection_json(const std::string& path, const SelectionResult& result);
SelectionResult read_selection_json(const std::string& path);

// --- metrics JSON -----------------------------------------------------------
// {target_class, mask_source, n_features, precision, recall, f1, accuracy,
//  auc, confusion:[[TN,FP],[FN,TP]], train_time_seconds}

struct MetricsReport {
  std::string target_class;  // lowercase class name
  std::string mask_source;   // "full", "sa", "exhaustive" or a subset name
  int n_features = 0;
  Metrics metrics;
};

std::string metrics_to_json(const MetricsReport& report);
void write_metrics_json(const std::string& path, const MetricsReport& report);
MetricsReport read_metrics_json(const std::string& path);

// --- evaluation CSVs --------------------------------------------------------

// Header "fpr,tpr,threshold", one row per distinct threshold.
void write_roc_csv(const std::string& path, const std::vector<RocPoint>& points);

// Header "feature,importance", descending by importance.
void write_importances_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, double>>& importances);

// --- dataset writers --------------------------------------------------------
// Emit the normalized input formats (JSONL transactions with canonical
// decimal value_btc strings, labels CSV, rates CSV), used by the synthetic
// pipeline so generated datasets round-trip through the regular loaders.

void write_transactions_jsonl(const std::string& path,
                              std::span<const AddressHistory> histories);
void write_labels_csv(const std::string& path,
                      std::span<const AddressHistory> histories);
void write_rates_csv(const std::string& path, const RateTable& rates);

}  // namespace qubosel
