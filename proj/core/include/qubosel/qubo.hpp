#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qubosel/features.hpp"

namespace qubosel {

// Spearman rank correlation with average ranks for ties. Constant input on
// either side yields 0 by convention. Throws LengthMismatchError when sizes
// differ and TooFewSamplesError for fewer than 2 samples.
double spearman(std::span<const double> x, std::span<const double> y);

// Average (fractional) 1-based ranks, ties sharing the mean of their span.
std::vector<double> average_ranks(std::span<const double> values);

struct CorrelationSet {
  std::size_t n = 0;
  std::vector<double> rho_outcome;  // spearman(column j, outcome), length n
  std::vector<double> rho_pairs;    // n*n row-major, symmetric, unit diagonal

  double pair(std::size_t j, std::size_t k) const { return rho_pairs[j * n + k]; }
  double& pair(std::size_t j, std::size_t k) { return rho_pairs[j * n + k]; }
};

// Column-wise Spearman correlations of features against the binary outcome
// and between all feature pairs.
CorrelationSet correlations(const FeatureMatrix& matrix);

// Symmetric QUBO for relevance/redundancy feature selection:
//   q[j][j] = -alpha * |rho_outcome[j]|
//   q[j][k] = (1 - alpha) * |rho_pairs[j][k]|   (j != k)
// so that x^T Q x balances outcome relevance against pairwise redundancy,
// each unordered pair counted twice by the quadratic form.
struct QuboInstance {
  std::size_t n = 0;
  double alpha = 0.5;
  std::vector<double> q;  // n*n row-major, symmetric

  double at(std::size_t j, std::size_t k) const { return q[j * n + k]; }
  double& at(std::size_t j, std::size_t k) { return q[j * n + k]; }
};

// Throws AlphaOutOfRangeError unless 0 <= alpha <= 1.
QuboInstance build_qubo(const CorrelationSet& corr, double alpha);

struct SelectionMask {
  std::vector<std::uint8_t> bits;  // 0/1 per canonical feature

  std::size_t size() const { return bits.size(); }
  std::size_t count() const;
  bool operator==(const SelectionMask&) const = default;
};

// x^T Q x for a 0/1 mask. Throws LengthMismatchError when sizes differ.
double energy(const QuboInstance& qubo, const SelectionMask& mask);

// Energy change of flipping bit `i`, O(n).
double flip_delta(const QuboInstance& qubo, const SelectionMask& mask, std::size_t i);

struct AnnealSchedule {
  double beta_start = 0.1;
  double beta_end = 10.0;
  int sweeps = 1000;
  int restarts = 8;
};

// Throws InvalidScheduleError (a solver precondition) on non-positive or
// non-monotonic parameters.
void validate(const AnnealSchedule& schedule);

enum class SolverKind { SA, Exhaustive, NamedSubset };

std::string_view to_string(SolverKind kind);

struct SelectionResult {
  SolverKind solver = SolverKind::SA;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  AnnealSchedule schedule;
  SelectionMask mask;
  double energy = 0;  // recomputed exactly from the final mask
  std::vector<std::string> selected_names;
  double wall_time_seconds = 0;  // solver compute time only
};

// Enumerates all 2^n masks in ascending little-endian order, keeping the
// first (smallest) mask that attains the minimal energy. Throws
// TooManyFeaturesError for n > 24.
SelectionResult solve_exhaustive(const QuboInstance& qubo,
                                 std::span<const std::string> names);

// Simulated annealing: `restarts` independent runs, each sweeping variables
// in index order under a geometric beta ramp with Metropolis acceptance and
// incremental O(n) energy deltas. Returns the lowest-energy mask ever
// visited; ties across restarts resolve to the lowest restart index.
// Deterministic for a given (seed, schedule); restarts may run on up to
// `threads` workers without changing the result.
SelectionResult solve_sa(const QuboInstance& qubo, const AnnealSchedule& schedule,
                         std::uint64_t seed, std::span<const std::string> names,
                         int threads = 1);

// Reads feature names from a subset file, one per line ('#' comments and
// blank lines ignored). Names are returned as-is; validation happens when a
// mask is built. Throws ParseError when the file cannot be opened.
std::vector<std::string> load_subset_names(const std::string& path);

// Builds a canonical-width mask from canonical feature names. Throws
// UnknownFeatureNameError on any other name.
SelectionMask load_named_subset(const std::string& path);
SelectionMask subset_mask(std::span<const std::string> subset_names);

std::vector<std::string> selected_names(const SelectionMask& mask,
                                        std::span<const std::string> names);

}  // namespace qubosel
