#include <chrono>
#include <cmath>
#include <random>

#include "qubosel/errors.hpp"
#include "qubosel/parallel.hpp"
#include "qubosel/qubo.hpp"
#include "qubosel/random.hpp"

namespace qubosel {

namespace {

struct RestartOutcome {
  double energy = 0;  // exact recompute of best_mask
  SelectionMask best_mask;
};

double beta_at(const AnnealSchedule& s, int sweep) {
  if (s.sweeps == 1) return s.beta_start;
  const double t = static_cast<double>(sweep) / static_cast<double>(s.sweeps - 1);
  return s.beta_start * std::pow(s.beta_end / s.beta_start, t);
}

RestartOutcome run_restart(const QuboInstance& qubo, const AnnealSchedule& schedule,
                           std::uint64_t seed, int restart) {
  std::mt19937_64 rng = substream_engine(seed, static_cast<std::uint64_t>(restart));
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_real_distribution<double> uniform01(0.0, 1.0);

  SelectionMask state;
  state.bits.resize(qubo.n);
  for (std::size_t j = 0; j < qubo.n; ++j)
    state.bits[j] = static_cast<std::uint8_t>(bit(rng));

  double current = energy(qubo, state);
  RestartOutcome best{current, state};

  for (int sweep = 0; sweep < schedule.sweeps; ++sweep) {
    const double beta = beta_at(schedule, sweep);
    for (std::size_t i = 0; i < qubo.n; ++i) {
      const double delta = flip_delta(qubo, state, i);
      if (delta <= 0.0 || uniform01(rng) < std::exp(-beta * delta)) {
        state.bits[i] ^= 1u;
        current += delta;
        if (current < best.energy) {
          best.energy = current;
          best.best_mask = state;
        }
      }
    }
  }
  // The tracked energy accumulates rounding from incremental deltas; report
  // the exact value of the winning mask.
  best.energy = energy(qubo, best.best_mask);
  return best;
}

}  // namespace

SelectionResult solve_sa(const QuboInstance& qubo, const AnnealSchedule& schedule,
                         std::uint64_t seed, std::span<const std::string> names,
                         int threads) {
  validate(schedule);
  const auto start = std::chrono::steady_clock::now();

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(schedule.restarts));
  parallel_for(outcomes.size(), threads, [&](std::size_t r) {
    outcomes[r] = run_restart(qubo, schedule, seed, static_cast<int>(r));
  });

  std::size_t winner = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].energy < outcomes[winner].energy) winner = r;

  // The mask recorded mid-anneal is not necessarily 1-flip optimal, so
  // finish with a greedy descent. Bits the objective is exactly indifferent
  // about (constant columns have zero relevance and zero redundancy
  // everywhere) random-walk freely during the anneal and would otherwise
  // stick in whatever state the best-energy snapshot caught them; among
  // equal-energy masks, settle on the smallest one.
  SelectionMask& mask = outcomes[winner].best_mask;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j < qubo.n; ++j) {
      const double delta = flip_delta(qubo, mask, j);
      if (delta < 0.0 || (mask.bits[j] && delta == 0.0)) {
        mask.bits[j] ^= 1u;
        changed = true;
      }
    }
  }
  outcomes[winner].energy = energy(qubo, mask);

  SelectionResult result;
  result.solver = SolverKind::SA;
  result.alpha = qubo.alpha;
  result.seed = seed;
  result.schedule = schedule;
  result.mask = std::move(outcomes[winner].best_mask);
  result.energy = outcomes[winner].energy;
  result.selected_names = selected_names(result.mask, names);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace qubosel
