#include "qubosel/qubo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "qubosel/errors.hpp"

namespace qubosel {

QuboInstance build_qubo(const CorrelationSet& corr, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw AlphaOutOfRangeError("alpha must lie in [0, 1], got " + std::to_string(alpha));
  QuboInstance qubo;
  qubo.n = corr.n;
  qubo.alpha = alpha;
  qubo.q.assign(corr.n * corr.n, 0.0);
  for (std::size_t j = 0; j < corr.n; ++j) {
    qubo.at(j, j) = -alpha * std::fabs(corr.rho_outcome[j]);
    for (std::size_t k = 0; k < corr.n; ++k)
      if (k != j) qubo.at(j, k) = (1.0 - alpha) * std::fabs(corr.pair(j, k));
  }
  return qubo;
}

std::size_t SelectionMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
}

double energy(const QuboInstance& qubo, const SelectionMask& mask) {
  if (mask.size() != qubo.n)
    throw LengthMismatchError("mask length " + std::to_string(mask.size()) +
                              " does not match QUBO size " + std::to_string(qubo.n));
  double e = 0;
  for (std::size_t j = 0; j < qubo.n; ++j) {
    if (!mask.bits[j]) continue;
    e += qubo.at(j, j);
    for (std::size_t k = j + 1; k < qubo.n; ++k)
      if (mask.bits[k]) e += 2.0 * qubo.at(j, k);
  }
  return e;
}

double flip_delta(const QuboInstance& qubo, const SelectionMask& mask, std::size_t i) {
  // Flipping x_i changes the quadratic form by (1-2x_i) * (q_ii + 2*sum_k q_ik x_k).
  double coupling = 0;
  for (std::size_t k = 0; k < qubo.n; ++k)
    if (k != i && mask.bits[k]) coupling += qubo.at(i, k);
  const double direction = mask.bits[i] ? -1.0 : 1.0;
  return direction * (qubo.at(i, i) + 2.0 * coupling);
}

void validate(const AnnealSchedule& schedule) {
  if (!(schedule.beta_start > 0) || !std::isfinite(schedule.beta_start) ||
      !std::isfinite(schedule.beta_end) || schedule.beta_end < schedule.beta_start)
    throw InvalidScheduleError("anneal schedule needs 0 < beta_start <= beta_end");
  if (schedule.sweeps < 1 || schedule.restarts < 1)
    throw InvalidScheduleError("anneal schedule needs sweeps >= 1 and restarts >= 1");
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::SA: return "SA";
    case SolverKind::Exhaustive: return "Exhaustive";
    case SolverKind::NamedSubset: return "NamedSubset";
  }
  return "";
}

std::vector<std::string> selected_names(const SelectionMask& mask,
                                        std::span<const std::string> names) {
  if (names.size() != mask.size())
    throw LengthMismatchError("name list length does not match mask length");
  std::vector<std::string> out;
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask.bits[j]) out.push_back(names[j]);
  return out;
}

SelectionResult solve_exhaustive(const QuboInstance& qubo,
                                 std::span<const std::string> names) {
  if (qubo.n > 24)
    throw TooManyFeaturesError("exhaustive solver supports at most 24 features, got " +
                               std::to_string(qubo.n));
  const auto start = std::chrono::steady_clock::now();

  const std::uint32_t limit = 1u << qubo.n;
  SelectionMask mask;
  mask.bits.assign(qubo.n, 0);
  double best_energy = 0;  // mask 0 has energy 0
  std::uint32_t best_mask = 0;
  for (std::uint32_t candidate = 1; candidate < limit; ++candidate) {
    // Fresh per-mask evaluation keeps zero-energy ties exact.
    double e = 0;
    for (std::size_t j = 0; j < qubo.n; ++j) {
      if (!(candidate >> j & 1u)) continue;
      e += qubo.at(j, j);
      for (std::size_t k = j + 1; k < qubo.n; ++k)
        if (candidate >> k & 1u) e += 2.0 * qubo.at(j, k);
    }
    if (e < best_energy) {
      best_energy = e;
      best_mask = candidate;
    }
  }

  SelectionResult result;
  result.solver = SolverKind::Exhaustive;
  result.alpha = qubo.alpha;
  result.mask.bits.resize(qubo.n);
  for (std::size_t j = 0; j < qubo.n; ++j)
    result.mask.bits[j] = static_cast<std::uint8_t>(best_mask >> j & 1u);
  result.energy = energy(qubo, result.mask);
  result.selected_names = selected_names(result.mask, names);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SelectionMask subset_mask(std::span<const std::string> subset_names) {
  SelectionMask mask;
  mask.bits.assign(kFeatureCount, 0);
  for (const std::string& name : subset_names) mask.bits[feature_index(name)] = 1;
  return mask;
}

std::vector<std::string> load_subset_names(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open subset file: " + path);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t");
    names.push_back(line.substr(begin, end - begin + 1));
  }
  return names;
}

SelectionMask load_named_subset(const std::string& path) {
  return subset_mask(load_subset_names(path));
}

}  // namespace qubosel
