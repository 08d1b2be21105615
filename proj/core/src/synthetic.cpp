#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "qubosel/errors.hpp"
#include "qubosel/features.hpp"
#include "qubosel/ingest.hpp"
#include "qubosel/random.hpp"

namespace qubosel {

namespace {

// Behavioral knobs. Each plantable feature is driven by exactly one knob so
// that planted signals stay as orthogonal as the features allow.
enum Knob : int {
  kPaybackRate,
  kCoinbaseRate,
  kReceivedShare,  // received vs spent split of the ordinary-tx mass
  kIntervalScale,
  kMultiOutput,
  kBalanceTilt,
  kMultiInput,
  kTxFrequency,  // pulls the interval scale down
  kTxCount,
  kKnobCount
};

struct PlantSpec {
  const char* feature;
  Knob knob;
  double gain;  // latent shift per unit of class_separation
};

// Gains are calibrated so that at class_separation = 1.5 the measured
// standardized mean difference lands just above the floor. Overshooting is
// counterproductive: the shared class signal raises the pairwise correlation
// between planted features quadratically in the effect size, which makes the
// redundancy term punish exactly the features the selector should keep.
constexpr PlantSpec kPlantable[] = {
    {"r_payback", kPaybackRate, 1.10},
    {"r_coinbase", kCoinbaseRate, 1.18},
    // Negative: the target class receives proportionally less often. The
    // payback and coinbase plants already consume role mass, so an upward
    // received shift would have nowhere to come from.
    {"r_received", kReceivedShare, -1.24},
    {"m1_interval", kIntervalScale, 1.90},
    {"avg_n_outputs", kMultiOutput, 1.17},
    {"mean_balance_btc", kBalanceTilt, 2.80},
    {"avg_n_inputs", kMultiInput, 1.23},
    {"f_tx", kTxFrequency, 4.00},
    {"n_tx", kTxCount, 1.89},
};

const PlantSpec* find_plantable(const std::string& name) {
  for (const PlantSpec& spec : kPlantable)
    if (name == spec.feature) return &spec;
  return nullptr;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

constexpr std::int64_t kSecondsPerDay = 86400;

struct Window {
  std::int64_t rate_start_day;   // first rate table date
  std::int64_t rate_days;        // number of daily rates
  std::int64_t first_tx;         // earliest allowed tx timestamp
  std::int64_t first_tx_spread;  // uniform start offset in seconds
  std::int64_t last_tx;          // hard cap on timestamps
};

Window make_window() {
  const std::int64_t start_day = parse_date("2015-06-01");
  Window w{};
  w.rate_start_day = start_day;
  w.rate_days = 1700;
  w.first_tx = (start_day + 30) * kSecondsPerDay;
  w.first_tx_spread = 365 * kSecondsPerDay;
  w.last_tx = (start_day + w.rate_days - 60) * kSecondsPerDay;
  return w;
}

std::string format_date(std::int64_t day) {
  const std::chrono::year_month_day ymd{
      std::chrono::sys_days{std::chrono::days{day}}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

RateTable make_rates(std::uint64_t seed, const Window& w) {
  std::mt19937_64 rng = substream_engine(seed, 0x72617465u);  // "rate"
  std::normal_distribution<double> step(0.0, 0.012);
  RateTable table;
  table.entries.reserve(static_cast<std::size_t>(w.rate_days));
  double rate = 250.0;
  for (std::int64_t d = 0; d < w.rate_days; ++d) {
    const std::int64_t day = w.rate_start_day + d;
    table.entries.push_back({format_date(day), day, rate});
    rate = clamp(rate * std::exp(step(rng)), 5.0, 50000.0);
  }
  return table;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Splits `total` into `parts` positive satoshi amounts.
std::vector<Satoshi> split_amount(Satoshi total, int parts, std::mt19937_64& rng) {
  std::vector<Satoshi> out;
  if (parts <= 1 || total < parts * 2) {
    out.push_back(total);
    return out;
  }
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> weights(static_cast<std::size_t>(parts));
  double sum = 0;
  for (double& weight : weights) {
    weight = 0.1 + u01(rng);
    sum += weight;
  }
  Satoshi assigned = 0;
  for (int i = 0; i < parts - 1; ++i) {
    Satoshi piece = static_cast<Satoshi>(
        static_cast<double>(total) * weights[static_cast<std::size_t>(i)] / sum);
    piece = std::max<Satoshi>(piece, 1);
    assigned += piece;
    out.push_back(piece);
  }
  out.push_back(std::max<Satoshi>(total - assigned, 1));
  return out;
}

struct AddressPlan {
  double p_payback = 0.10;
  double p_coinbase = 0.10;
  double p_received = 0.34;
  double p_spent = 0.46;
  double interval_scale_days = 2.5;
  double lambda_out = 0.25;
  double lambda_in = 0.30;
  double order_tilt = 0.0;  // income-early (positive) vs outgo-early ordering
  int tx_count = 1;
};

enum class TxRole : int { kCoinbase, kPayback, kReceived, kSpent };

// Income txs raise the running balance, outgo txs lower it. Reordering by
// role changes the balance trajectory without touching any per-tx amount or
// the timestamps themselves.
double role_direction(TxRole role) {
  switch (role) {
    case TxRole::kCoinbase:
    case TxRole::kReceived:
      return 1.0;
    case TxRole::kSpent:
      return -1.0;
    case TxRole::kPayback:
      return 0.0;
  }
  return 0.0;
}

SyntheticData generate_once(const SyntheticConfig& cfg,
                            const std::vector<const PlantSpec*>& planted,
                            const std::vector<double>& gain_boosts) {
  const Window window = make_window();
  SyntheticData data;
  data.rates = make_rates(cfg.seed, window);

  // Within-class equicorrelation of the planted knob latents. Informative
  // features are unavoidably rank-correlated through the class signal itself;
  // anti-correlating the within-class part keeps the planted block from
  // looking fully redundant to the selector.
  const std::size_t p = planted.size();
  double kappa = 0.0, latent_scale = 1.0;
  if (p >= 2) {
    const double w = -0.96 / static_cast<double>(p - 1);
    const double u = w / (1.0 - w);
    kappa = 1.0 - std::sqrt(1.0 + static_cast<double>(p) * u);
    latent_scale = std::sqrt(1.0 + u);
  }

  for (int c = 0; c < kAddressClassCount; ++c) {
    const auto cls = static_cast<AddressClass>(c);
    const bool is_target = cls == kSyntheticTargetClass;
    for (int a = 0; a < cfg.addresses_per_class; ++a) {
      std::mt19937_64 rng = substream_engine(
          cfg.seed, 0x10000u + static_cast<std::uint64_t>(c) * 100000u +
                        static_cast<std::uint64_t>(a));
      // Fresh distribution objects per address: std::normal_distribution
      // caches a spare draw, and shared state would couple the per-address
      // substreams.
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      std::normal_distribution<double> normal(0.0, 1.0);

      // Latents: anti-correlated for planted knobs, independent otherwise.
      std::array<double, kKnobCount> latent{};
      if (p > 0) {
        std::vector<double> g(p);
        double g_mean = 0;
        for (double& v : g) {
          v = normal(rng);
          g_mean += v;
        }
        g_mean /= static_cast<double>(p);
        for (std::size_t i = 0; i < p; ++i) {
          double z = p >= 2 ? (g[i] - kappa * g_mean) / latent_scale : g[i];
          // The anti-correlated within-class part must oppose the
          // between-class part, whose sign follows the product of the two
          // plants' shift directions. Negate the latent for downward plants
          // so the cancellation keeps working against upward ones.
          if (planted[i]->gain < 0) z = -z;
          if (is_target) z += planted[i]->gain * gain_boosts[i] * cfg.class_separation;
          latent[planted[i]->knob] = z;
        }
      }
      for (int k = 0; k < kKnobCount; ++k) {
        const bool is_planted_knob =
            std::any_of(planted.begin(), planted.end(),
                        [&](const PlantSpec* s) { return s->knob == k; });
        if (!is_planted_knob) latent[static_cast<std::size_t>(k)] = normal(rng);
      }

      AddressPlan plan;
      plan.p_payback = clamp(0.10 + 0.06 * latent[kPaybackRate], 0.01, 0.90);
      plan.p_coinbase = clamp(0.10 + 0.06 * latent[kCoinbaseRate], 0.01, 0.88);
      // Keep probability mass for ordinary txs, and keep one planted rate
      // from silently starving the other when both are extreme.
      const double role_sum = plan.p_payback + plan.p_coinbase;
      if (role_sum > 0.80) {
        plan.p_payback *= 0.80 / role_sum;
        plan.p_coinbase *= 0.80 / role_sum;
      }
      // The received rate works off a fixed base instead of the live
      // remainder, so shifts in the payback and coinbase rates never leak
      // into it; spent absorbs whatever mass is left. There is no spent-rate
      // feature, so the absorbed variance lands only in the transaction-count
      // family, where the class-independent history-length variance dilutes
      // it.
      const double remainder = 1.0 - plan.p_payback - plan.p_coinbase;
      const double received_share =
          clamp(0.5 + 0.11 * latent[kReceivedShare], 0.05, 0.95);
      plan.p_received = clamp(0.80 * received_share, 0.02, remainder - 0.02);
      plan.p_spent = remainder - plan.p_received;
      // Narrow behavioral spreads on purpose: with the between-address spread
      // small, per-history estimation noise dominates, which separates a
      // mean feature from its variance sibling instead of leaving them as
      // rank-identical transforms of the same scale parameter.
      plan.interval_scale_days =
          clamp(std::exp(std::log(2.5) + 0.10 * latent[kIntervalScale] -
                         0.10 * latent[kTxFrequency]),
                0.05, 30.0);
      // High baselines put the "has at least two inputs/outputs" counters in
      // their saturated region, so multiplicity shifts register in the means
      // rather than in those threshold counts.
      plan.lambda_out = clamp(std::exp(1.5 + 0.45 * latent[kMultiOutput]), 0.0, 20.0);
      plan.lambda_in = clamp(std::exp(1.5 + 0.45 * latent[kMultiInput]), 0.0, 20.0);
      plan.order_tilt = 0.12 * latent[kBalanceTilt];
      const int range = cfg.tx_count_max - cfg.tx_count_min + 1;
      plan.tx_count =
          cfg.tx_count_min +
          std::min(range - 1, static_cast<int>(static_cast<double>(range) *
                                               normal_cdf(latent[kTxCount])));

      char addr_buf[32];
      std::snprintf(addr_buf, sizeof(addr_buf), "%s_%04d",
                    std::string(to_string(cls)).c_str(), a);
      AddressHistory history;
      history.address = addr_buf;
      history.label = cls;

      // Extra input/output multiplicity applies to every tx shape so the
      // knobs stay effective regardless of how the role mix shifts. Amounts
      // share one per-address scale factor, independent of class: every
      // amount-derived feature then co-varies through it, the way real
      // behavioral features all ride an address's overall activity level.
      // Role and class never touch the amount distribution; the balance knob
      // only reorders which roles come early.
      const double amount_scale = std::exp(0.45 * normal(rng));
      // Per-tx amounts stay tight enough around the address scale that an
      // address occupies the same two or three USD decades whether it has 15
      // txs or 100. Saturated occupancy keeps the decade-fraction columns
      // from turning into rank proxies for the per-role tx counts, while the
      // straddle across adjacent decades makes neighbouring fractions trade
      // off against each other instead of acting as independent columns.
      std::lognormal_distribution<double> amount_btc(
          std::log(0.08 * amount_scale), 0.40);
      std::gamma_distribution<double> interval_days(3.0, plan.interval_scale_days / 3.0);
      // Over-dispersed multiplicity: a per-address dispersion draw decouples
      // the spread of the io counts from their mean, so the std features
      // carry their own class-independent noise instead of tracking the avg
      // features rank for rank.
      const double dispersion = std::exp(1.5 + 1.4 * normal(rng));
      std::gamma_distribution<double> out_rate(
          dispersion, std::max(plan.lambda_out, 1e-9) / dispersion);
      std::gamma_distribution<double> in_rate(
          dispersion, std::max(plan.lambda_in, 1e-9) / dispersion);
      auto extra_out = [&](std::mt19937_64& g) {
        return std::poisson_distribution<int>(out_rate(g))(g);
      };
      auto extra_in = [&](std::mt19937_64& g) {
        return std::poisson_distribution<int>(in_rate(g))(g);
      };

      const auto n_tx = static_cast<std::size_t>(plan.tx_count);
      std::vector<std::int64_t> stamps(n_tx);
      std::vector<std::int64_t> heights(n_tx);
      std::int64_t t = window.first_tx +
                       static_cast<std::int64_t>(u01(rng) *
                                                 static_cast<double>(window.first_tx_spread));
      std::int64_t height = 360000 + static_cast<std::int64_t>(u01(rng) * 1000.0);
      for (std::size_t i = 0; i < n_tx; ++i) {
        const double dt_days = interval_days(rng);
        t += std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::llround(dt_days * kSecondsPerDay)));
        t = std::min(t, window.last_tx);
        height += 1 + static_cast<std::int64_t>(dt_days * 144.0);
        stamps[i] = t;
        heights[i] = height;
      }

      // Two txs of every role are guaranteed (when the history is long
      // enough). Without the floor, per-role amount moments degenerate into
      // indicators of whether the role occurred at all, which rank-correlates
      // them with the role rates they should be independent of.
      std::vector<TxRole> roles;
      roles.reserve(n_tx);
      if (n_tx >= 12)
        roles = {TxRole::kCoinbase, TxRole::kCoinbase, TxRole::kPayback,
                 TxRole::kPayback,  TxRole::kReceived, TxRole::kReceived,
                 TxRole::kSpent,    TxRole::kSpent};
      while (roles.size() < n_tx) {
        const double roll = u01(rng);
        if (roll < plan.p_coinbase)
          roles.push_back(TxRole::kCoinbase);
        else if (roll < plan.p_coinbase + plan.p_payback)
          roles.push_back(TxRole::kPayback);
        else if (roll < plan.p_coinbase + plan.p_payback + plan.p_received)
          roles.push_back(TxRole::kReceived);
        else
          roles.push_back(TxRole::kSpent);
      }

      // One primary amount per tx, drawn up front so the ordering pass can
      // see it: the coinbase reward, payback input, spent total, or received
      // amount, depending on the role.
      std::vector<Satoshi> primaries(n_tx);
      auto draw_sat = [&] {
        const double btc = clamp(amount_btc(rng), 1e-5, 300.0);
        return std::max<Satoshi>(static_cast<Satoshi>(std::llround(btc * 1e8)),
                                 1000);
      };
      for (Satoshi& primary : primaries) primary = draw_sat();
      std::vector<double> amount_rank(n_tx);
      {
        std::vector<std::size_t> by_amount(n_tx);
        for (std::size_t i = 0; i < n_tx; ++i) by_amount[i] = i;
        std::sort(by_amount.begin(), by_amount.end(), [&](std::size_t a, std::size_t b) {
          if (primaries[a] != primaries[b]) return primaries[a] < primaries[b];
          return a < b;
        });
        for (std::size_t r = 0; r < n_tx; ++r)
          amount_rank[by_amount[r]] =
              n_tx > 1 ? static_cast<double>(r) / static_cast<double>(n_tx - 1) : 0.5;
      }

      // Base ordering interleaves incomes and outgos by matched size rank, so
      // an untilted balance trajectory stays near zero instead of wandering
      // like a random walk. Each income sits just ahead of the similarly
      // sized outgo it funds.
      std::vector<double> base_pos(n_tx, 0.5);
      {
        std::vector<std::size_t> incomes, outgos;
        auto step_size = [&](std::size_t i) {
          switch (roles[i]) {
            case TxRole::kCoinbase: return primaries[i] / 4;
            case TxRole::kPayback: return primaries[i] / 6;
            default: return primaries[i];
          }
        };
        for (std::size_t i = 0; i < n_tx; ++i)
          (role_direction(roles[i]) >= 0 && roles[i] != TxRole::kPayback
               ? incomes
               : outgos)
              .push_back(i);
        auto by_size_desc = [&](std::vector<std::size_t>& v) {
          std::sort(v.begin(), v.end(), [&](std::size_t a, std::size_t b) {
            if (step_size(a) != step_size(b)) return step_size(a) > step_size(b);
            return a < b;
          });
        };
        by_size_desc(incomes);
        by_size_desc(outgos);
        for (std::size_t r = 0; r < incomes.size(); ++r)
          base_pos[incomes[r]] =
              (static_cast<double>(r) + 0.35) / static_cast<double>(incomes.size());
        for (std::size_t r = 0; r < outgos.size(); ++r)
          base_pos[outgos[r]] =
              (static_cast<double>(r) + 0.65) / static_cast<double>(outgos.size());
      }

      // Assign txs to time slots: low keys take the earliest slots. A
      // positive tilt pushes income ahead of spending, large incomes first
      // and large spends last, which moves the whole balance trajectory while
      // leaving every per-tx amount and timestamp distribution untouched.
      std::vector<double> keys(n_tx);
      for (std::size_t i = 0; i < n_tx; ++i)
        keys[i] = 1.1 * base_pos[i] + 0.16 * normal(rng) -
                  plan.order_tilt * role_direction(roles[i]) *
                      (0.2 + 1.6 * amount_rank[i]);
      std::vector<std::size_t> slot_order(n_tx);
      for (std::size_t i = 0; i < n_tx; ++i) slot_order[i] = i;
      std::sort(slot_order.begin(), slot_order.end(), [&](std::size_t a, std::size_t b) {
        if (keys[a] != keys[b]) return keys[a] < keys[b];
        return a < b;
      });

      for (std::size_t i = 0; i < n_tx; ++i) {
        TxRecord tx;
        tx.txid = hex64(rng()) + hex64(rng());
        tx.timestamp = stamps[i];
        tx.block_height = heights[i];

        auto ext_addr = [&] { return "x" + hex64(rng()); };
        const Satoshi primary = primaries[slot_order[i]];

        switch (roles[slot_order[i]]) {
          case TxRole::kCoinbase: {
            tx.is_coinbase = true;
            // Rewards run small relative to ordinary transfers; otherwise the
            // coinbase rate drags the balance trajectory along with it.
            tx.outputs.push_back(
                {history.address, std::max<Satoshi>(primary / 4, 1000)});
            const int extras = extra_out(rng);
            for (int e = 0; e < extras; ++e)
              tx.outputs.push_back({ext_addr(), draw_sat()});
            break;
          }
          case TxRole::kPayback: {
            // Self-transfer returning nearly everything: the address appears
            // on both sides and the net flow stays close to zero, so the
            // payback rate does not move the balance features.
            const Satoshi in = primary;
            std::uniform_real_distribution<double> back_share(0.70, 0.98);
            const Satoshi back =
                std::max<Satoshi>(static_cast<Satoshi>(
                                      static_cast<double>(in) * back_share(rng)),
                                  1);
            tx.inputs.push_back({history.address, in});
            tx.outputs.push_back({history.address, back});
            const int extras = extra_out(rng);
            const Satoshi leftover = in - back - std::max<Satoshi>(in / 500, 100);
            if (extras > 0 && leftover > 2 * extras)
              for (Satoshi piece : split_amount(leftover, extras, rng))
                tx.outputs.push_back({ext_addr(), piece});
            break;
          }
          case TxRole::kSpent: {
            const Satoshi total = primary;
            const int pieces = 1 + extra_in(rng);
            for (Satoshi piece : split_amount(total, pieces, rng))
              tx.inputs.push_back({history.address, piece});
            const Satoshi paid =
                std::max<Satoshi>(total - std::max<Satoshi>(total / 500, 1000), 1);
            const int outs = 1 + extra_out(rng);
            for (Satoshi part : split_amount(paid, outs, rng))
              tx.outputs.push_back({ext_addr(), part});
            break;
          }
          case TxRole::kReceived: {
            const Satoshi amount = primary;
            std::vector<Satoshi> side_amounts;
            const int extras = extra_out(rng);
            Satoshi side_total = 0;
            for (int e = 0; e < extras; ++e) {
              side_amounts.push_back(draw_sat());
              side_total += side_amounts.back();
            }
            const Satoshi funded =
                amount + side_total + std::max<Satoshi>(amount / 500, 1000);
            const int ins = 1 + extra_in(rng);
            for (Satoshi piece : split_amount(funded, ins, rng))
              tx.inputs.push_back({ext_addr(), piece});
            tx.outputs.push_back({history.address, amount});
            for (Satoshi side : side_amounts)
              tx.outputs.push_back({ext_addr(), side});
            break;
          }
        }
        history.txs.push_back(std::move(tx));
      }

      std::sort(history.txs.begin(), history.txs.end(),
                [](const TxRecord& x, const TxRecord& y) {
                  if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
                  return x.txid < y.txid;
                });
      data.histories.push_back(std::move(history));
    }
  }

  std::sort(data.histories.begin(), data.histories.end(),
            [](const AddressHistory& x, const AddressHistory& y) {
              return x.address < y.address;
            });
  return data;
}

// Pooled-variance Cohen's d between the target class and the rest for one
// extracted feature column.
double effect_size(const std::vector<double>& values,
                   const std::vector<bool>& is_target) {
  double sum_t = 0, sum_r = 0;
  std::size_t n_t = 0, n_r = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (is_target[i]) {
      sum_t += values[i];
      ++n_t;
    } else {
      sum_r += values[i];
      ++n_r;
    }
  }
  const double mean_t = sum_t / static_cast<double>(n_t);
  const double mean_r = sum_r / static_cast<double>(n_r);
  double ss_t = 0, ss_r = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - (is_target[i] ? mean_t : mean_r);
    (is_target[i] ? ss_t : ss_r) += d * d;
  }
  const double pooled =
      std::sqrt((ss_t + ss_r) / static_cast<double>(n_t + n_r - 2));
  const double gap = std::fabs(mean_t - mean_r);
  if (pooled == 0) return gap == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return gap / pooled;
}

}  // namespace

const std::vector<std::string>& default_planted_features() {
  static const std::vector<std::string> names = {
      "r_payback", "r_coinbase", "r_received", "avg_n_inputs", "avg_n_outputs"};
  return names;
}

SyntheticData generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.addresses_per_class < 1)
    throw InvalidConfigError("addresses_per_class must be >= 1");
  if (cfg.tx_count_min < 1 || cfg.tx_count_max < cfg.tx_count_min)
    throw InvalidConfigError("tx count range must satisfy 1 <= min <= max");
  if (cfg.tx_count_max > static_cast<int>(kDefaultHistoryCap))
    throw InvalidConfigError("tx_count_max exceeds the history cap of " +
                             std::to_string(kDefaultHistoryCap));
  if (!(cfg.class_separation >= 0) || !std::isfinite(cfg.class_separation))
    throw InvalidConfigError("class_separation must be finite and >= 0");

  std::vector<const PlantSpec*> planted;
  std::set<std::string> seen;
  for (const std::string& name : cfg.planted_informative_features) {
    const PlantSpec* spec = find_plantable(name);
    if (spec == nullptr)
      throw InvalidConfigError(
          "feature \"" + name +
          "\" has no generator knob (supported: r_payback, r_coinbase, r_received, "
          "m1_interval, avg_n_outputs, mean_balance_btc, avg_n_inputs, f_tx, n_tx)");
    if (!seen.insert(name).second)
      throw InvalidConfigError("feature \"" + name + "\" planted twice");
    planted.push_back(spec);
  }

  // The knob gains aim a little above the requested separation; sampling
  // noise can still leave a feature short on a given draw. Measure the actual
  // sample and regenerate, scaling up only the gains of features that fell
  // short. Boosting everything would work too, but overshooting inflates the
  // between-class correlation among planted features quadratically.
  std::vector<double> boosts(planted.size(), 1.0);
  for (int attempt = 0; attempt < 12; ++attempt) {
    SyntheticData data = generate_once(cfg, planted, boosts);
    if (planted.empty() || cfg.class_separation == 0) return data;

    std::vector<bool> is_target(data.histories.size());
    std::vector<std::vector<double>> columns(planted.size());
    for (auto& column : columns) column.reserve(data.histories.size());
    for (std::size_t i = 0; i < data.histories.size(); ++i) {
      is_target[i] = data.histories[i].label == kSyntheticTargetClass;
      const FeatureVector features = extract_features(data.histories[i], data.rates);
      for (std::size_t j = 0; j < planted.size(); ++j)
        columns[j].push_back(features[feature_index(planted[j]->feature)]);
    }
    bool all_separated = true;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const double d = effect_size(columns[j], is_target);
      if (std::getenv("QUBOSEL_SYNTH_DEBUG") != nullptr)
        std::fprintf(stderr, "[synth] attempt=%d %s d=%.3f\n", attempt,
                     planted[j]->feature, d);
      if (d < cfg.class_separation) {
        all_separated = false;
        boosts[j] *= clamp(1.04 * cfg.class_separation / std::max(d, 0.2), 1.02, 2.0);
      }
    }
    if (all_separated) return data;
  }
  throw InvalidConfigError(
      "generator cannot reach class_separation " +
      std::to_string(cfg.class_separation) +
      " for the requested planted features at this sample size");
}

}  // namespace qubosel
