#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qubosel/ingest.hpp"
#include "qubosel/txmodel.hpp"

namespace qubosel {

inline constexpr std::size_t kFeatureCount = 69;

// Canonical feature order. Every matrix column, mask bit and named subset
// refers to this list.
const std::array<std::string, kFeatureCount>& feature_names();

// Index of a canonical name; throws UnknownFeatureNameError.
std::size_t feature_index(std::string_view name);

// Decade bucket of a positive USD amount: the exponent i in [-3, 6] with
// 10^i <= amount < 10^(i+1), std::nullopt when the amount falls outside
// [1e-3, 1e7). Throws NonPositiveAmountError for amount <= 0.
std::optional<int> decade_bucket(double usd_amount);

struct Moments {
  double m1 = 0;  // mean
  double m2 = 0;  // population variance
  double m3 = 0;  // skewness E[(x-mu)^3] / sigma^3
  double m4 = 0;  // kurtosis E[(x-mu)^4] / sigma^4 (not excess)
};

// One-pass accumulator for the four moments (Welford-style central-moment
// updates, numerically stable for USD-scale samples). Empty -> all zeros;
// zero variance -> m3 = m4 = 0.
class RunningMoments {
 public:
  void add(double x);
  Moments finalize() const;
  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  // Population variance of what was added so far.
  double variance() const { return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0; }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
  double m3_ = 0;
  double m4_ = 0;
};

Moments moments(std::span<const double> samples);

struct FeatureVector {
  std::array<double, kFeatureCount> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

// Summarizes one address history into the canonical 69 features in a single
// forward pass over the (sorted) transactions. Throws EmptyHistoryError on an
// empty history and EmptyTableError when the rate table is empty.
FeatureVector extract_features(const AddressHistory& history, const RateTable& rates);

// Extraction always yields all 69 features, but a stored matrix may carry any
// distinct subset of canonical columns (e.g. a truncated matrix prepared for
// the exhaustive solver), so matrix rows are variable-width.
struct FeatureMatrix {
  std::vector<std::string> names;         // canonical names, column order
  std::vector<std::vector<double>> rows;  // rows[i].size() == names.size()
  std::vector<std::uint8_t> outcomes;     // 1 where label == target_class
  AddressClass target_class = AddressClass::Mixer;
};

// Target-independent feature rows keyed by address and class label; the shape
// the feature CSV stores. Binarize with to_matrix for a chosen target.
struct FeatureTable {
  std::vector<std::string> names;  // canonical names, column order
  std::vector<std::string> addresses;
  std::vector<AddressClass> labels;
  std::vector<std::vector<double>> rows;
};

// Extracts every labeled history in input order into a full-width table.
// Histories without a label are rejected (InvariantError); features need
// ground truth downstream.
FeatureTable build_table(std::span<const AddressHistory> histories,
                         const RateTable& rates);

// Binarizes labels one-vs-rest against the target class. Throws
// DegenerateOutcomeError when all outcomes are identical and
// TooFewSamplesError below two rows.
FeatureMatrix to_matrix(const FeatureTable& table, AddressClass target_class);

// build_table + to_matrix in one step.
FeatureMatrix build_matrix(std::span<const AddressHistory> histories,
                           const RateTable& rates, AddressClass target_class);

}  // namespace qubosel
