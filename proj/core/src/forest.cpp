#include "qubosel/forest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "qubosel/errors.hpp"
#include "qubosel/parallel.hpp"
#include "qubosel/random.hpp"

namespace qubosel {

namespace {

double gini_from_counts(std::int64_t positives, std::int64_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(positives) / static_cast<double>(total);
  const double q = 1.0 - p;
  return 1.0 - p * p - q * q;
}

struct TreeBuilder {
  const FeatureMatrix& matrix;
  const std::vector<std::size_t>& active;
  int mtry;
  int min_samples_split;
  std::optional<int> max_depth;
  std::mt19937_64 rng;

  std::vector<TreeNode> nodes;
  std::vector<double> importance;  // per canonical feature, this tree
  double root_size = 0;

  // Scratch buffers reused across nodes.
  std::vector<std::size_t> candidates;
  std::vector<std::size_t> order;

  TreeBuilder(const FeatureMatrix& matrix_in, const std::vector<std::size_t>& active_in,
              int mtry_in, int min_samples_split_in, std::optional<int> max_depth_in,
              std::mt19937_64 rng_in)
      : matrix(matrix_in),
        active(active_in),
        mtry(mtry_in),
        min_samples_split(min_samples_split_in),
        max_depth(max_depth_in),
        rng(rng_in),
        importance(matrix_in.names.size(), 0.0) {}

  std::int32_t build(std::vector<std::size_t>& rows, int depth) {
    const auto id = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();

    const auto size = static_cast<std::int64_t>(rows.size());
    std::int64_t positives = 0;
    for (std::size_t r : rows) positives += matrix.outcomes[r];

    const bool pure = positives == 0 || positives == size;
    const bool depth_capped = max_depth.has_value() && depth >= *max_depth;
    if (pure || size < min_samples_split || depth_capped) {
      nodes[id].vote = static_cast<std::uint8_t>(2 * positives > size ? 1 : 0);
      return id;
    }

    // Sample mtry distinct active features, evaluated in ascending index
    // order so that equal-gain ties resolve to the lowest feature, then the
    // lowest threshold.
    candidates = active;
    for (int i = 0; i < mtry; ++i) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i),
                                                      candidates.size() - 1);
      std::swap(candidates[static_cast<std::size_t>(i)], candidates[pick(rng)]);
    }
    candidates.resize(static_cast<std::size_t>(mtry));
    std::sort(candidates.begin(), candidates.end());

    const double parent_gini = gini_from_counts(positives, size);
    double best_gain = 0;
    std::size_t best_feature = 0;
    double best_threshold = 0;
    bool found = false;

    for (std::size_t f : candidates) {
      order = rows;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return matrix.rows[a][f] < matrix.rows[b][f];
      });
      std::int64_t left_pos = 0;
      for (std::int64_t i = 1; i < size; ++i) {
        left_pos += matrix.outcomes[order[static_cast<std::size_t>(i - 1)]];
        const double prev = matrix.rows[order[static_cast<std::size_t>(i - 1)]][f];
        const double next = matrix.rows[order[static_cast<std::size_t>(i)]][f];
        if (!(prev < next)) continue;
        const double threshold = prev + (next - prev) / 2.0;
        if (!(prev < threshold)) continue;  // midpoint rounded down to prev
        const std::int64_t left_n = i;
        const std::int64_t right_n = size - i;
        const double weighted =
            (static_cast<double>(left_n) * gini_from_counts(left_pos, left_n) +
             static_cast<double>(right_n) * gini_from_counts(positives - left_pos, right_n)) /
            static_cast<double>(size);
        const double gain = parent_gini - weighted;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_threshold = threshold;
          found = true;
        }
      }
    }

    if (!found) {
      nodes[id].vote = static_cast<std::uint8_t>(2 * positives > size ? 1 : 0);
      return id;
    }

    std::vector<std::size_t> left_rows, right_rows;
    left_rows.reserve(rows.size());
    right_rows.reserve(rows.size());
    for (std::size_t r : rows)
      (matrix.rows[r][best_feature] < best_threshold ? left_rows : right_rows)
          .push_back(r);

    importance[best_feature] +=
        static_cast<double>(size) / root_size * best_gain;
    nodes[id].feature = static_cast<std::int32_t>(best_feature);
    nodes[id].threshold = best_threshold;
    rows.clear();
    rows.shrink_to_fit();
    const std::int32_t left_id = build(left_rows, depth + 1);
    const std::int32_t right_id = build(right_rows, depth + 1);
    nodes[id].left = left_id;
    nodes[id].right = right_id;
    return id;
  }
};

}  // namespace

double gini(std::span<const std::uint8_t> outcomes) {
  if (outcomes.empty()) throw EmptyLabelsError("gini of an empty label set");
  std::int64_t positives = 0;
  for (std::uint8_t y : outcomes) positives += y;
  return gini_from_counts(positives, static_cast<std::int64_t>(outcomes.size()));
}

std::uint8_t DecisionTree::predict(std::span<const double> row) const {
  std::int32_t id = 0;
  while (nodes[static_cast<std::size_t>(id)].feature >= 0) {
    const TreeNode& node = nodes[static_cast<std::size_t>(id)];
    id = row[static_cast<std::size_t>(node.feature)] < node.threshold ? node.left
                                                                      : node.right;
  }
  return nodes[static_cast<std::size_t>(id)].vote;
}

ForestModel fit(const FeatureMatrix& matrix, const SelectionMask& mask,
                const ForestConfig& config, int threads) {
  const std::size_t m = matrix.rows.size();
  if (mask.size() != matrix.names.size())
    throw LengthMismatchError("mask length " + std::to_string(mask.size()) +
                              " does not match feature count " +
                              std::to_string(matrix.names.size()));
  if (m == 0) throw EmptyLabelsError("cannot train on an empty matrix");
  if (matrix.outcomes.size() != m)
    throw LengthMismatchError("outcome column length does not match row count");

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask.bits[j]) active.push_back(j);
  if (active.empty()) throw NoFeaturesSelectedError("selection mask is all zeros");

  const std::int64_t positives =
      std::accumulate(matrix.outcomes.begin(), matrix.outcomes.end(), std::int64_t{0});
  if (positives == 0 || positives == static_cast<std::int64_t>(m))
    throw DegenerateOutcomeError("training outcomes are all identical");

  if (config.n_trees < 1)
    throw InvalidConfigError("n_trees must be >= 1, got " + std::to_string(config.n_trees));
  if (config.min_samples_split < 2)
    throw InvalidConfigError("min_samples_split must be >= 2");
  if (config.max_depth.has_value() && *config.max_depth < 0)
    throw InvalidConfigError("max_depth must be >= 0");
  int mtry;
  if (config.features_per_split.has_value()) {
    mtry = *config.features_per_split;
    if (mtry < 1 || mtry > static_cast<int>(active.size()))
      throw InvalidConfigError("features_per_split must lie in [1, " +
                               std::to_string(active.size()) + "], got " +
                               std::to_string(mtry));
  } else {
    mtry = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(active.size()))));
  }

  const auto start = std::chrono::steady_clock::now();

  ForestModel model;
  model.config = config;
  model.mask = mask;
  model.trees.resize(static_cast<std::size_t>(config.n_trees));
  std::vector<std::vector<double>> tree_importance(
      static_cast<std::size_t>(config.n_trees));

  parallel_for(model.trees.size(), threads, [&](std::size_t t) {
    TreeBuilder builder(matrix, active, mtry, config.min_samples_split,
                        config.max_depth, substream_engine(config.seed, t));

    std::vector<std::size_t> rows(m);
    if (config.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, m - 1);
      for (std::size_t i = 0; i < m; ++i) rows[i] = pick(builder.rng);
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    builder.root_size = static_cast<double>(rows.size());
    builder.build(rows, 0);

    model.trees[t].nodes = std::move(builder.nodes);
    tree_importance[t] = std::move(builder.importance);
  });

  // Mean impurity decrease across trees, normalized to sum 1.
  model.importance.assign(matrix.names.size(), 0.0);
  for (const auto& imp : tree_importance)
    for (std::size_t j = 0; j < imp.size(); ++j) model.importance[j] += imp[j];
  double total = std::accumulate(model.importance.begin(), model.importance.end(), 0.0);
  if (total > 0) {
    for (double& v : model.importance) v /= total;
  } else {
    // No tree found a useful split; spread the weight uniformly.
    for (std::size_t j : active)
      model.importance[j] = 1.0 / static_cast<double>(active.size());
  }

  model.fit_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return model;
}

double predict_proba(const ForestModel& model, std::span<const double> row,
                     const SelectionMask& mask) {
  if (!(mask == model.mask))
    throw MaskMismatchError("prediction mask does not match the training mask");
  std::int64_t votes = 0;
  for (const DecisionTree& tree : model.trees) votes += tree.predict(row);
  return static_cast<double>(votes) / static_cast<double>(model.trees.size());
}

std::vector<std::pair<std::string, double>> feature_importances(
    const ForestModel& model, std::span<const std::string> names) {
  if (names.size() != model.importance.size())
    throw LengthMismatchError("name list length does not match importance length");
  std::vector<std::pair<std::string, double>> out;
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < names.size(); ++j)
    if (model.mask.bits[j]) idx.push_back(j);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return model.importance[a] > model.importance[b];
  });
  out.reserve(idx.size());
  for (std::size_t j : idx) out.emplace_back(names[j], model.importance[j]);
  return out;
}

}  // namespace qubosel
