#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qubosel/ingest.hpp"
#include "qubosel/qubo.hpp"
#include "qubosel/txmodel.hpp"

// Independent reference implementations used to cross-check the library.
// They share the library's data structures but none of its algorithms:
// correlations go rank-then-Pearson, the AUC counts score pairs one by one,
// moments are recomputed from buffered samples in several passes and the
// feature oracle re-derives roles, rates and buckets inline.
namespace qubosel::testing {

// Spearman correlation per the textbook definition: average ranks on both
// sides, then the Pearson coefficient of the rank vectors. Constant input on
// either side yields 0, matching the library convention.
double oracle_spearman(std::span<const double> x, std::span<const double> y);

// Mann-Whitney AUC by explicit pair enumeration: each positive/negative pair
// contributes 1 when the positive scores higher, 1/2 on a tie.
double oracle_auc(std::span<const double> scores,
                  std::span<const std::uint8_t> outcomes);

// Mean, population variance, skewness and kurtosis recomputed from the full
// sample in separate passes. Empty input gives zeros, zero variance gives
// zero skewness and kurtosis.
struct OracleMoments {
  double m1 = 0;
  double m2 = 0;
  double m3 = 0;
  double m4 = 0;
};
OracleMoments oracle_moments(std::span<const double> samples);

// Minimum of x^T Q x over every 0/1 assignment, each candidate evaluated
// with a fresh dense quadratic form. Intended for n <= 20.
double oracle_min_energy(const QuboInstance& qubo);

// The 69 summary features recomputed naively: one pass to buffer per-role
// samples, separate passes for every statistic, a linear rate-table scan per
// transaction. Keyed by feature name so the test does not depend on the
// library's column order.
std::map<std::string, double> oracle_features(const AddressHistory& history,
                                              const RateTable& rates);

}  // namespace qubosel::testing
