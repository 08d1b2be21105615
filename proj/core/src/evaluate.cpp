#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "qubosel/errors.hpp"
#include "qubosel/forest.hpp"
#include "qubosel/random.hpp"

namespace qubosel {

namespace {

std::pair<std::int64_t, std::int64_t> class_counts(
    std::span<const std::uint8_t> outcomes) {
  std::int64_t pos = 0;
  for (std::uint8_t y : outcomes) pos += y;
  return {pos, static_cast<std::int64_t>(outcomes.size()) - pos};
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> outcomes) {
  if (scores.size() != outcomes.size())
    throw LengthMismatchError("scores and outcomes differ in length");
  const auto [pos, neg] = class_counts(outcomes);
  if (pos == 0 || neg == 0)
    throw SingleClassError("AUC needs both classes present");

  // Rank-sum form of the Mann-Whitney statistic; average ranks make tied
  // score pairs count 1/2 exactly.
  const std::vector<double> ranks = average_ranks(scores);
  double rank_sum = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (outcomes[i]) rank_sum += ranks[i];
  const double p = static_cast<double>(pos);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(neg));
}

std::vector<RocPoint> roc_points(std::span<const double> scores,
                                 std::span<const std::uint8_t> outcomes) {
  if (scores.size() != outcomes.size())
    throw LengthMismatchError("scores and outcomes differ in length");
  const auto [pos, neg] = class_counts(outcomes);
  if (pos == 0 || neg == 0)
    throw SingleClassError("ROC needs both classes present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  std::vector<RocPoint> points;
  std::int64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    // Consume the whole tie group: at this threshold every score >= threshold
    // is classified positive.
    while (i < order.size() && scores[order[i]] == threshold) {
      if (outcomes[order[i]])
        ++tp;
      else
        ++fp;
      ++i;
    }
    points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                      static_cast<double>(tp) / static_cast<double>(pos), threshold});
  }
  return points;
}

std::vector<std::vector<std::size_t>> stratified_kfold(
    std::span<const std::uint8_t> outcomes, int k, std::uint64_t seed) {
  if (k < 2) throw InvalidConfigError("stratified k-fold needs k >= 2");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    (outcomes[i] ? pos : neg).push_back(i);
  if (static_cast<int>(pos.size()) < k || static_cast<int>(neg.size()) < k)
    throw ClassTooSmallError("each class needs at least k=" + std::to_string(k) +
                             " members, got " + std::to_string(pos.size()) +
                             " positive / " + std::to_string(neg.size()) + " negative");

  auto pos_rng = substream_engine(seed, 0);
  auto neg_rng = substream_engine(seed, 1);
  std::shuffle(pos.begin(), pos.end(), pos_rng);
  std::shuffle(neg.begin(), neg.end(), neg_rng);

  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < pos.size(); ++i)
    folds[i % static_cast<std::size_t>(k)].push_back(pos[i]);
  for (std::size_t i = 0; i < neg.size(); ++i)
    folds[i % static_cast<std::size_t>(k)].push_back(neg[i]);
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

Metrics cross_validate(const FeatureMatrix& matrix, const SelectionMask& mask,
                       const ForestConfig& config, int folds, int threads,
                       std::vector<double>* pooled_scores) {
  const std::size_t m = matrix.rows.size();
  if (m == 0) throw EmptyLabelsError("cannot cross-validate an empty matrix");
  const auto fold_indices = stratified_kfold(matrix.outcomes, folds, config.seed);

  std::vector<double> scores(m, 0.0);
  Metrics metrics;
  std::vector<std::uint8_t> in_test(m, 0);

  for (std::size_t f = 0; f < fold_indices.size(); ++f) {
    std::fill(in_test.begin(), in_test.end(), 0);
    for (std::size_t i : fold_indices[f]) in_test[i] = 1;

    FeatureMatrix train;
    train.names = matrix.names;
    train.target_class = matrix.target_class;
    train.rows.reserve(m - fold_indices[f].size());
    for (std::size_t i = 0; i < m; ++i) {
      if (in_test[i]) continue;
      train.rows.push_back(matrix.rows[i]);
      train.outcomes.push_back(matrix.outcomes[i]);
    }

    ForestConfig fold_config = config;
    fold_config.seed = substream_seed(config.seed, 0x666f6c64u + f);  // per-fold stream

    const auto start = std::chrono::steady_clock::now();
    const ForestModel model = fit(train, mask, fold_config, threads);
    metrics.train_time_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (std::size_t i : fold_indices[f])
      scores[i] = predict_proba(model, matrix.rows[i], mask);
  }

  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const bool predicted = scores[i] >= 0.5;
    if (matrix.outcomes[i])
      (predicted ? tp : fn) += 1;
    else
      (predicted ? fp : tn) += 1;
  }
  metrics.confusion = {{{tn, fp}, {fn, tp}}};
  const double dtp = static_cast<double>(tp);
  metrics.precision = tp + fp > 0 ? dtp / static_cast<double>(tp + fp) : 0.0;
  metrics.recall = tp + fn > 0 ? dtp / static_cast<double>(tp + fn) : 0.0;
  metrics.f1 = metrics.precision + metrics.recall > 0
                   ? 2.0 * metrics.precision * metrics.recall /
                         (metrics.precision + metrics.recall)
                   : 0.0;
  metrics.accuracy = static_cast<double>(tp + tn) / static_cast<double>(m);
  metrics.auc = roc_auc(scores, matrix.outcomes);
  if (pooled_scores != nullptr) *pooled_scores = std::move(scores);
  return metrics;
}

}  // namespace qubosel
