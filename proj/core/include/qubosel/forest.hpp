#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qubosel/features.hpp"
#include "qubosel/qubo.hpp"

namespace qubosel {

struct ForestConfig {
  int n_trees = 100;
  std::optional<int> max_depth;            // nullopt = grow to purity
  int min_samples_split = 2;
  std::optional<int> features_per_split;   // nullopt = max(1, floor(sqrt(active)))
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

// Gini impurity of a set of binary outcomes.
// Throws EmptyLabelsError on an empty set.
double gini(std::span<const std::uint8_t> outcomes);

struct TreeNode {
  std::int32_t feature = -1;   // canonical feature index; -1 for leaves
  double threshold = 0;        // go left when value < threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::uint8_t vote = 0;       // leaf majority class (ties vote 0)
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // root at index 0

  std::uint8_t predict(std::span<const double> row) const;
};

struct ForestModel {
  ForestConfig config;
  SelectionMask mask;
  std::vector<DecisionTree> trees;
  // Mean impurity decrease per canonical feature, weighted by node sample
  // fraction and normalized to sum 1 over active features.
  std::vector<double> importance;
  double fit_seconds = 0;
};

// Trains bagged CART trees on the masked columns. Deterministic for a given
// config seed regardless of `threads`. Throws NoFeaturesSelectedError,
// DegenerateOutcomeError, EmptyLabelsError, LengthMismatchError or
// InvalidConfigError.
ForestModel fit(const FeatureMatrix& matrix, const SelectionMask& mask,
                const ForestConfig& config, int threads = 1);

// Fraction of trees voting class 1. The mask must equal the training mask
// (MaskMismatchError otherwise).
double predict_proba(const ForestModel& model, std::span<const double> row,
                     const SelectionMask& mask);

// Mann-Whitney AUC: (#concordant + 0.5 * #tied) / (#pos * #neg), computed via
// average ranks. Throws SingleClassError when only one class is present.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> outcomes);

struct RocPoint {
  double fpr = 0;
  double tpr = 0;
  double threshold = 0;
};

// One point per distinct threshold (descending); a score counts positive when
// score >= threshold.
std::vector<RocPoint> roc_points(std::span<const double> scores,
                                 std::span<const std::uint8_t> outcomes);

// Deterministic stratified folds: indices 0..n-1 partitioned so per-fold
// positive counts differ by at most one. Throws ClassTooSmallError when a
// class has fewer than k members.
std::vector<std::vector<std::size_t>> stratified_kfold(
    std::span<const std::uint8_t> outcomes, int k, std::uint64_t seed);

struct Metrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double accuracy = 0;
  double auc = 0;
  // [[TN, FP], [FN, TP]], pooled over folds at threshold 0.5 (score >= 0.5).
  std::array<std::array<std::int64_t, 2>, 2> confusion{};
  double train_time_seconds = 0;  // summed wall time around the fit calls
};

// When `pooled_scores` is non-null it receives each row's held-out-fold score
// (the scores behind the pooled AUC), indexed like the matrix rows.
Metrics cross_validate(const FeatureMatrix& matrix, const SelectionMask& mask,
                       const ForestConfig& config, int folds, int threads = 1,
                       std::vector<double>* pooled_scores = nullptr);

// Active features with their importance weights, descending.
std::vector<std::pair<std::string, double>> feature_importances(
    const ForestModel& model, std::span<const std::string> names);

}  // namespace qubosel
