#include "qubosel/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include <nlohmann/json.hpp>

#include "qubosel/errors.hpp"
#include "qubosel/io.hpp"

namespace qubosel {

namespace {

namespace fs = std::filesystem;

std::string out_path(const PipelineConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// Builds the mask over the matrix's columns from subset names; every name
// must be canonical and present in the matrix.
SelectionMask subset_mask_for(const FeatureMatrix& matrix,
                              const std::vector<std::string>& subset) {
  SelectionMask mask;
  mask.bits.assign(matrix.names.size(), 0);
  for (const std::string& name : subset) {
    feature_index(name);  // canonical-name check
    const auto it = std::find(matrix.names.begin(), matrix.names.end(), name);
    if (it == matrix.names.end())
      throw InvalidConfigError("subset feature \"" + name +
                               "\" is not a column of the matrix");
    mask.bits[static_cast<std::size_t>(it - matrix.names.begin())] = 1;
  }
  return mask;
}

}  // namespace

std::string selection_filename(const PipelineConfig& cfg) {
  switch (cfg.solver) {
    case SolverKind::SA:
      return "selection_sa.json";
    case SolverKind::Exhaustive:
      return "selection_exhaustive.json";
    case SolverKind::NamedSubset:
      return "selection_subset_" + fs::path(cfg.subset_path).stem().string() + ".json";
  }
  return "selection.json";
}

std::string mask_source_of_selection(const std::string& selection_path) {
  if (selection_path == "full") return "full";
  std::string stem = fs::path(selection_path).stem().string();
  constexpr std::string_view prefix = "selection_";
  if (stem.rfind(prefix, 0) == 0) stem.erase(0, prefix.size());
  return stem.empty() ? "selection" : stem;
}

void cmd_synth(const PipelineConfig& cfg, std::ostream& log) {
  SyntheticConfig synth = cfg.synth;
  synth.seed = cfg.seed;
  if (synth.planted_informative_features.empty())
    synth.planted_informative_features = default_planted_features();

  const SyntheticData data = generate_synthetic(synth);

  std::size_t tx_count = 0;
  for (const AddressHistory& h : data.histories) tx_count += h.txs.size();

  write_transactions_jsonl(out_path(cfg, kTransactionsFile), data.histories);
  write_labels_csv(out_path(cfg, kLabelsFile), data.histories);
  write_rates_csv(out_path(cfg, kRatesFile), data.rates);

  log << "synth: " << data.histories.size() << " addresses, " << tx_count
      << " transactions, " << data.rates.entries.size() << " daily rates, "
      << synth.planted_informative_features.size() << " planted features -> "
      << cfg.out_dir << "\n";
}

void cmd_extract(const PipelineConfig& cfg, std::ostream& log) {
  const LabelMap labels = load_labels(cfg.labels);
  const RateTable rates = load_rates(cfg.rates);
  TxStream stream(cfg.transactions);
  const std::vector<AddressHistory> histories =
      build_histories(stream, labels, static_cast<std::size_t>(cfg.history_cap));
  const FeatureTable table = build_table(histories, rates);

  const std::string path = out_path(cfg, kFeaturesFile);
  write_feature_csv(path, table);
  log << "extract: wrote " << path << ": " << table.rows.size() << " rows, "
      << 2 + table.names.size() << " columns\n";
}

void cmd_select(const PipelineConfig& cfg, const std::string& matrix_csv,
                std::ostream& log) {
  const FeatureTable table = read_feature_csv(matrix_csv);
  const FeatureMatrix matrix = to_matrix(table, cfg.target_class);
  const CorrelationSet corr = correlations(matrix);
  const QuboInstance qubo = build_qubo(corr, cfg.alpha);

  SelectionResult result;
  switch (cfg.solver) {
    case SolverKind::SA:
      result = solve_sa(qubo, cfg.schedule, cfg.seed, matrix.names, cfg.threads);
      break;
    case SolverKind::Exhaustive:
      result = solve_exhaustive(qubo, matrix.names);
      result.seed = cfg.seed;
      break;
    case SolverKind::NamedSubset: {
      if (cfg.subset_path.empty())
        throw InvalidConfigError("solver = subset requires a subset file path");
      const auto start = std::chrono::steady_clock::now();
      const std::vector<std::string> names = load_subset_names(cfg.subset_path);
      result.mask = subset_mask_for(matrix, names);
      result.solver = SolverKind::NamedSubset;
      result.alpha = qubo.alpha;
      result.seed = cfg.seed;
      result.energy = energy(qubo, result.mask);
      result.selected_names = selected_names(result.mask, matrix.names);
      result.wall_time_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();
      break;
    }
  }

  const std::string path = out_path(cfg, selection_filename(cfg));
  write_selection_json(path, result);
  log << "select: " << to_string(result.solver) << " alpha=" << result.alpha
      << " picked " << result.mask.count() << "/" << matrix.names.size()
      << " features, energy=" << result.energy << " -> " << path << "\n";
}

void cmd_train(const PipelineConfig& cfg, const std::string& matrix_csv,
               const std::string& selection, std::ostream& log) {
  const FeatureTable table = read_feature_csv(matrix_csv);
  const FeatureMatrix matrix = to_matrix(table, cfg.target_class);

  SelectionMask mask;
  if (selection == "full") {
    mask.bits.assign(matrix.names.size(), 1);
  } else {
    const SelectionResult sel = read_selection_json(selection);
    mask = sel.mask;
    if (mask.size() != matrix.names.size())
      throw MaskMismatchError("selection mask has " + std::to_string(mask.size()) +
                              " bits but the matrix has " +
                              std::to_string(matrix.names.size()) + " columns");
  }
  const std::string source = mask_source_of_selection(selection);

  ForestConfig forest = cfg.forest;
  forest.seed = cfg.seed;

  std::vector<double> pooled_scores;
  const Metrics metrics =
      cross_validate(matrix, mask, forest, cfg.folds, cfg.threads, &pooled_scores);

  MetricsReport report;
  report.target_class = std::string(to_string(matrix.target_class));
  report.mask_source = source;
  report.n_features = static_cast<int>(mask.count());
  report.metrics = metrics;
  const std::string metrics_path = out_path(cfg, "metrics_" + source + ".json");
  write_metrics_json(metrics_path, report);

  const std::string roc_path = out_path(cfg, "roc_" + source + ".csv");
  write_roc_csv(roc_path, roc_points(pooled_scores, matrix.outcomes));

  // Importances come from one fit over all rows; cross-validation models see
  // only subsets.
  const ForestModel model = fit(matrix, mask, forest, cfg.threads);
  const std::string imp_path = out_path(cfg, "importances_" + source + ".csv");
  write_importances_csv(imp_path, feature_importances(model, matrix.names));

  log << "train[" << source << "]: n_features=" << report.n_features
      << " precision=" << fmt(metrics.precision) << " recall=" << fmt(metrics.recall)
      << " f1=" << fmt(metrics.f1) << " accuracy=" << fmt(metrics.accuracy)
      << " auc=" << fmt(metrics.auc)
      << " train_time=" << fmt(metrics.train_time_seconds) << "s -> "
      << metrics_path << "\n";
}

void cmd_report(const PipelineConfig& cfg, std::ostream& log) {
  std::vector<std::string> paths;
  if (fs::is_directory(cfg.out_dir)) {
    for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
      const std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && name.rfind("metrics_", 0) == 0 &&
          name.size() > 13 && name.substr(name.size() - 5) == ".json")
        paths.push_back(entry.path().string());
    }
  }
  if (paths.empty())
    throw ParseError("no metrics_*.json found in " + cfg.out_dir);

  std::vector<MetricsReport> reports;
  reports.reserve(paths.size());
  for (const std::string& path : paths) reports.push_back(read_metrics_json(path));
  std::sort(reports.begin(), reports.end(),
            [](const MetricsReport& a, const MetricsReport& b) {
              if (a.mask_source != b.mask_source) return a.mask_source < b.mask_source;
              return a.target_class < b.target_class;
            });

  std::string text;
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s %-10s %10s %10s %10s %10s %10s %10s %14s\n",
                "method", "target", "n_features", "precision", "recall", "f1",
                "accuracy", "auc", "train_time_s");
  text += line;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const MetricsReport& r : reports) {
    std::snprintf(line, sizeof(line),
                  "%-24s %-10s %10d %10.4f %10.4f %10.4f %10.4f %10.4f %14.4f\n",
                  r.mask_source.c_str(), r.target_class.c_str(), r.n_features,
                  r.metrics.precision, r.metrics.recall, r.metrics.f1,
                  r.metrics.accuracy, r.metrics.auc, r.metrics.train_time_seconds);
    text += line;
    nlohmann::ordered_json row;
    row["method"] = r.mask_source;
    row["target_class"] = r.target_class;
    row["n_features"] = r.n_features;
    row["precision"] = r.metrics.precision;
    row["recall"] = r.metrics.recall;
    row["f1"] = r.metrics.f1;
    row["accuracy"] = r.metrics.accuracy;
    row["auc"] = r.metrics.auc;
    row["confusion"] = {{r.metrics.confusion[0][0], r.metrics.confusion[0][1]},
                        {r.metrics.confusion[1][0], r.metrics.confusion[1][1]}};
    row["train_time_seconds"] = r.metrics.train_time_seconds;
    rows.push_back(row);
  }

  write_text_atomic(out_path(cfg, kReportTextFile), text);
  write_text_atomic(out_path(cfg, kReportJsonFile), rows.dump(2) + "\n");
  log << text;
}

}  // namespace qubosel
