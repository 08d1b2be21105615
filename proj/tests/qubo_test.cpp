#include "qubosel/qubo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qubosel/errors.hpp"
#include "test_util.hpp"

namespace qubosel {
namespace {

using testing::TempDir;

TEST(AverageRanksTest, TiesShareTheMeanRank) {
  const double values[] = {10.0, 20.0, 20.0, 30.0};
  const std::vector<double> ranks = average_ranks(values);
  EXPECT_EQ(ranks, (std::vector<double>{1.0, 2.5, 2.5, 4.0}));

  const double flat[] = {7.0, 7.0, 7.0};
  EXPECT_EQ(average_ranks(flat), (std::vector<double>{2.0, 2.0, 2.0}));
}

TEST(SpearmanTest, KnownSmallSample) {
  const double x[] = {1.0, 2.0, 2.0, 4.0};
  const double y[] = {1.0, 3.0, 2.0, 4.0};
  const double expected = 3.0 / std::sqrt(10.0);
  EXPECT_NEAR(spearman(x, y), expected, 1e-15);
  EXPECT_NEAR(testing::oracle_spearman(x, y), expected, 1e-15);
}

TEST(SpearmanTest, MonotoneAndConstantConventions) {
  const double x[] = {1.0, 5.0, 9.0, 20.0};
  const double up[] = {2.0, 3.0, 100.0, 101.0};
  const double down[] = {4.0, 3.0, 2.0, 1.0};
  const double flat[] = {6.0, 6.0, 6.0, 6.0};
  EXPECT_DOUBLE_EQ(spearman(x, up), 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, down), -1.0);
  EXPECT_DOUBLE_EQ(spearman(x, flat), 0.0);
  EXPECT_DOUBLE_EQ(spearman(flat, x), 0.0);
}

TEST(SpearmanTest, InputValidation) {
  const double x[] = {1.0, 2.0};
  const double y[] = {1.0, 2.0, 3.0};
  EXPECT_THROW(spearman(x, y), LengthMismatchError);
  EXPECT_THROW(spearman(std::span<const double>(x, 1), std::span<const double>(y, 1)),
               TooFewSamplesError);
  const std::vector<double> empty;
  EXPECT_THROW(spearman(empty, empty), TooFewSamplesError);
}

TEST(SpearmanTest, MatchesRankThenPearsonOracle) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> length(2, 60);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = length(rng);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      // Round half the trials to a coarse grid so ties are common.
      x[i] = trial % 2 == 0 ? std::round(value(rng)) : value(rng);
      y[i] = trial % 2 == 0 ? std::round(value(rng)) : value(rng);
    }
    EXPECT_NEAR(spearman(x, y), testing::oracle_spearman(x, y), 1e-12);
  }
}

FeatureMatrix three_column_matrix() {
  FeatureMatrix m;
  m.names = {"c0", "c1", "c2"};
  m.rows = {{1.0, 9.0, 2.0}, {2.0, 7.0, 2.0}, {3.0, 5.0, 2.0},
            {4.0, 3.0, 2.0}, {5.0, 1.0, 2.0}, {6.0, 2.0, 2.0}};
  m.outcomes = {0, 0, 1, 0, 1, 1};
  return m;
}

TEST(CorrelationsTest, MatchesColumnwiseSpearman) {
  const FeatureMatrix m = three_column_matrix();
  const CorrelationSet corr = correlations(m);
  ASSERT_EQ(corr.n, 3u);

  std::vector<double> outcome_as_double(m.outcomes.begin(), m.outcomes.end());
  for (std::size_t j = 0; j < 3; ++j) {
    std::vector<double> col;
    for (const auto& row : m.rows) col.push_back(row[j]);
    EXPECT_NEAR(corr.rho_outcome[j], testing::oracle_spearman(col, outcome_as_double),
                1e-12);
    EXPECT_DOUBLE_EQ(corr.pair(j, j), 1.0);
    for (std::size_t k = 0; k < 3; ++k)
      EXPECT_DOUBLE_EQ(corr.pair(j, k), corr.pair(k, j));
  }
  // Column 2 is constant, so every correlation involving it is 0.
  EXPECT_DOUBLE_EQ(corr.rho_outcome[2], 0.0);
  EXPECT_DOUBLE_EQ(corr.pair(0, 2), 0.0);
}

CorrelationSet two_feature_correlations() {
  CorrelationSet corr;
  corr.n = 2;
  corr.rho_outcome = {0.8, -0.6};
  corr.rho_pairs = {1.0, -0.5, -0.5, 1.0};
  return corr;
}

TEST(BuildQuboTest, BalancesRelevanceAgainstRedundancy) {
  const QuboInstance qubo = build_qubo(two_feature_correlations(), 0.5);
  EXPECT_DOUBLE_EQ(qubo.at(0, 0), -0.4);
  EXPECT_DOUBLE_EQ(qubo.at(1, 1), -0.3);
  EXPECT_DOUBLE_EQ(qubo.at(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(qubo.at(1, 0), 0.25);

  SelectionMask both;
  both.bits = {1, 1};
  EXPECT_DOUBLE_EQ(energy(qubo, both), -0.4 - 0.3 + 2.0 * 0.25);
}

TEST(BuildQuboTest, AlphaExtremesIsolateEachTerm) {
  const QuboInstance relevance_only = build_qubo(two_feature_correlations(), 1.0);
  EXPECT_DOUBLE_EQ(relevance_only.at(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(relevance_only.at(0, 0), -0.8);

  const QuboInstance redundancy_only = build_qubo(two_feature_correlations(), 0.0);
  EXPECT_DOUBLE_EQ(redundancy_only.at(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(redundancy_only.at(0, 1), 0.5);
}

TEST(BuildQuboTest, RejectsAlphaOutsideUnitInterval) {
  EXPECT_THROW(build_qubo(two_feature_correlations(), -0.01), AlphaOutOfRangeError);
  EXPECT_THROW(build_qubo(two_feature_correlations(), 1.01), AlphaOutOfRangeError);
}

QuboInstance random_instance(std::mt19937_64& rng, std::size_t n, double alpha) {
  CorrelationSet corr;
  corr.n = n;
  std::uniform_real_distribution<double> mag(0.0, 1.0);
  corr.rho_outcome.resize(n);
  corr.rho_pairs.assign(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    corr.rho_outcome[j] = mag(rng);
    corr.pair(j, j) = 1.0;
    for (std::size_t k = j + 1; k < n; ++k) {
      const double r = mag(rng);
      corr.pair(j, k) = r;
      corr.pair(k, j) = r;
    }
  }
  return build_qubo(corr, alpha);
}

TEST(EnergyTest, FlipDeltaMatchesEnergyDifference) {
  std::mt19937_64 rng(31);
  const QuboInstance qubo = random_instance(rng, 10, 0.6);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    SelectionMask mask;
    mask.bits.resize(10);
    for (auto& b : mask.bits) b = static_cast<std::uint8_t>(bit(rng));
    const double base = energy(qubo, mask);
    for (std::size_t i = 0; i < 10; ++i) {
      SelectionMask flipped = mask;
      flipped.bits[i] ^= 1u;
      EXPECT_NEAR(flip_delta(qubo, mask, i), energy(qubo, flipped) - base, 1e-12);
    }
  }
}

TEST(EnergyTest, MaskLengthMustMatch) {
  std::mt19937_64 rng(32);
  const QuboInstance qubo = random_instance(rng, 4, 0.5);
  SelectionMask mask;
  mask.bits = {1, 0};
  EXPECT_THROW(energy(qubo, mask), LengthMismatchError);
}

TEST(ScheduleTest, ValidatesParameters) {
  EXPECT_NO_THROW(validate(AnnealSchedule{}));
  AnnealSchedule s;
  s.beta_start = 0.0;
  EXPECT_THROW(validate(s), InvalidScheduleError);
  s = AnnealSchedule{};
  s.beta_end = 0.05;
  EXPECT_THROW(validate(s), InvalidScheduleError);
  s = AnnealSchedule{};
  s.sweeps = 0;
  EXPECT_THROW(validate(s), InvalidScheduleError);
  s = AnnealSchedule{};
  s.restarts = 0;
  EXPECT_THROW(validate(s), InvalidScheduleError);
}

std::vector<std::string> index_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

TEST(ExhaustiveSolverTest, FindsBruteForceMinimum) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> alpha_dist(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> size(1, 10);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = size(rng);
    const QuboInstance qubo = random_instance(rng, n, alpha_dist(rng));
    const SelectionResult result = solve_exhaustive(qubo, index_names(n));
    EXPECT_NEAR(result.energy, testing::oracle_min_energy(qubo), 1e-12);
    EXPECT_NEAR(result.energy, energy(qubo, result.mask), 0.0);
    EXPECT_EQ(result.selected_names.size(), result.mask.count());
  }
}

TEST(ExhaustiveSolverTest, TiesResolveToTheSmallestMask) {
  // Symmetric two-feature instance: {0} and {1} tie at -0.3 while {0,1}
  // costs 0.2, so the enumeration order must pick bit 0.
  QuboInstance qubo;
  qubo.n = 2;
  qubo.q = {-0.3, 0.4, 0.4, -0.3};
  const SelectionResult result = solve_exhaustive(qubo, index_names(2));
  EXPECT_EQ(result.mask.bits, (std::vector<std::uint8_t>{1, 0}));
  EXPECT_DOUBLE_EQ(result.energy, -0.3);
}

TEST(ExhaustiveSolverTest, RefusesMoreThan24Features) {
  QuboInstance qubo;
  qubo.n = 25;
  qubo.q.assign(25 * 25, 0.0);
  EXPECT_THROW(solve_exhaustive(qubo, index_names(25)), TooManyFeaturesError);
}

TEST(SaSolverTest, MatchesExhaustiveOnSmallInstances) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> alpha_dist(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const QuboInstance qubo = random_instance(rng, 12, alpha_dist(rng));
    const SelectionResult exact = solve_exhaustive(qubo, index_names(12));
    const SelectionResult sa = solve_sa(qubo, AnnealSchedule{}, seed, index_names(12));
    EXPECT_DOUBLE_EQ(sa.energy, exact.energy) << "seed " << seed;
  }
}

TEST(SaSolverTest, DeterministicAcrossThreadCounts) {
  std::mt19937_64 rng(52);
  const QuboInstance qubo = random_instance(rng, 20, 0.6);
  const auto names = index_names(20);
  const SelectionResult one = solve_sa(qubo, AnnealSchedule{}, 9, names, 1);
  const SelectionResult again = solve_sa(qubo, AnnealSchedule{}, 9, names, 1);
  const SelectionResult four = solve_sa(qubo, AnnealSchedule{}, 9, names, 4);
  EXPECT_EQ(one.mask, again.mask);
  EXPECT_EQ(one.mask, four.mask);
  EXPECT_DOUBLE_EQ(one.energy, four.energy);
}

TEST(SaSolverTest, ResultIsOneFlipOptimal) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const QuboInstance qubo = random_instance(rng, 18, 0.5);
    const SelectionResult sa = solve_sa(qubo, AnnealSchedule{}, 77, index_names(18));
    EXPECT_NEAR(sa.energy, energy(qubo, sa.mask), 0.0);
    for (std::size_t i = 0; i < qubo.n; ++i) {
      const double delta = flip_delta(qubo, sa.mask, i);
      EXPECT_GE(delta, 0.0) << "bit " << i;
      // Indifferent bits settle to 0, so zero deltas only occur on clear bits.
      if (delta == 0.0) EXPECT_EQ(sa.mask.bits[i], 0);
    }
  }
}

TEST(SaSolverTest, RejectsInvalidSchedule) {
  std::mt19937_64 rng(54);
  const QuboInstance qubo = random_instance(rng, 4, 0.5);
  AnnealSchedule bad;
  bad.sweeps = 0;
  EXPECT_THROW(solve_sa(qubo, bad, 0, index_names(4)), InvalidScheduleError);
}

TEST(SubsetTest, LoadsNamesIgnoringCommentsAndBlanks) {
  TempDir dir("subset");
  const std::string path = dir.write(
      "names.txt", "# header comment\nf_tx\n\n  n_tx  # trailing comment\r\nr_payback\n");
  const std::vector<std::string> names = load_subset_names(path);
  EXPECT_EQ(names, (std::vector<std::string>{"f_tx", "n_tx", "r_payback"}));

  const SelectionMask mask = load_named_subset(path);
  EXPECT_EQ(mask.size(), kFeatureCount);
  EXPECT_EQ(mask.count(), 3u);
  EXPECT_EQ(mask.bits[feature_index("n_tx")], 1);
}

TEST(SubsetTest, UnknownNamesAndMissingFilesThrow) {
  TempDir dir("subset_bad");
  EXPECT_THROW(load_subset_names(dir.file("missing.txt")), ParseError);
  EXPECT_THROW(load_named_subset(dir.write("bad.txt", "f_tx\nnot_a_feature\n")),
               UnknownFeatureNameError);
}

TEST(SubsetTest, SelectedNamesInvertsSubsetMask) {
  const std::vector<std::string> names = {"f_tx", "n_tx", "r_payback"};
  SelectionMask mask;
  mask.bits = {1, 0, 1};
  EXPECT_EQ(selected_names(mask, names),
            (std::vector<std::string>{"f_tx", "r_payback"}));
  SelectionMask wrong;
  wrong.bits = {1, 0};
  EXPECT_THROW(selected_names(wrong, names), LengthMismatchError);
}

}  // namespace
}  // namespace qubosel
