#include <algorithm>
#include <cmath>
#include <numeric>

#include "qubosel/errors.hpp"
#include "qubosel/qubo.hpp"

namespace qubosel {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t m = values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(m);
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i + 1;
    while (j < m && values[order[j]] == values[order[i]]) ++j;
    // 1-based ranks i+1 .. j averaged over the tie run.
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  double mean_x = 0, mean_y = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(m);
  mean_y /= static_cast<double>(m);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw LengthMismatchError("spearman inputs differ in length: " +
                              std::to_string(x.size()) + " vs " +
                              std::to_string(y.size()));
  if (x.size() < 2)
    throw TooFewSamplesError("spearman needs at least 2 samples, got " +
                             std::to_string(x.size()));
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson(rx, ry);
}

CorrelationSet correlations(const FeatureMatrix& matrix) {
  const std::size_t n = matrix.names.size();
  const std::size_t m = matrix.rows.size();
  if (matrix.outcomes.size() != m)
    throw LengthMismatchError("outcome column length does not match row count");
  if (m < 2)
    throw TooFewSamplesError("correlations need at least 2 rows, got " +
                             std::to_string(m));

  // Rank every column once; Spearman of any two columns is then the Pearson
  // correlation of their rank vectors, identical to calling spearman() on the
  // raw columns.
  std::vector<std::vector<double>> col_ranks(n);
  std::vector<double> column(m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) column[i] = matrix.rows[i][j];
    col_ranks[j] = average_ranks(column);
  }
  std::vector<double> outcome(m);
  for (std::size_t i = 0; i < m; ++i) outcome[i] = static_cast<double>(matrix.outcomes[i]);
  const std::vector<double> outcome_ranks = average_ranks(outcome);

  CorrelationSet corr;
  corr.n = n;
  corr.rho_outcome.resize(n);
  corr.rho_pairs.assign(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    corr.rho_outcome[j] = pearson(col_ranks[j], outcome_ranks);
    corr.pair(j, j) = 1.0;
    for (std::size_t k = j + 1; k < n; ++k) {
      const double rho = pearson(col_ranks[j], col_ranks[k]);
      corr.pair(j, k) = rho;
      corr.pair(k, j) = rho;
    }
  }
  return corr;
}

}  // namespace qubosel
