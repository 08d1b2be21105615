#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace qubosel::testing {

namespace {

std::vector<double> naive_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the mean of 1-based ranks i+1..j+1.
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double naive_pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double pop_var_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean_of(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

}  // namespace

double oracle_spearman(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> rx = naive_ranks(x);
  const std::vector<double> ry = naive_ranks(y);
  return naive_pearson(rx, ry);
}

double oracle_auc(std::span<const double> scores,
                  std::span<const std::uint8_t> outcomes) {
  double concordant = 0;
  std::int64_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!outcomes[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (outcomes[j]) continue;
      ++pairs;
      if (scores[i] > scores[j])
        concordant += 1.0;
      else if (scores[i] == scores[j])
        concordant += 0.5;
    }
  }
  return concordant / static_cast<double>(pairs);
}

OracleMoments oracle_moments(std::span<const double> samples) {
  OracleMoments out;
  const std::size_t n = samples.size();
  if (n == 0) return out;
  const std::vector<double> v(samples.begin(), samples.end());
  out.m1 = mean_of(v);
  out.m2 = pop_var_of(v);
  if (out.m2 > 0) {
    double s3 = 0, s4 = 0;
    for (double x : v) {
      const double d = x - out.m1;
      s3 += d * d * d;
      s4 += d * d * d * d;
    }
    const double sigma = std::sqrt(out.m2);
    out.m3 = s3 / static_cast<double>(n) / (sigma * sigma * sigma);
    out.m4 = s4 / static_cast<double>(n) / (out.m2 * out.m2);
  }
  return out;
}

double oracle_min_energy(const QuboInstance& qubo) {
  const std::size_t n = qubo.n;
  double best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double e = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask >> j & 1u)) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (mask >> k & 1u) e += qubo.q[j * n + k];
    }
    best = std::min(best, e);
  }
  return best;
}

namespace {

enum class NaiveRole { Coinbase, Spent, Received, Payback };

NaiveRole naive_role(const TxRecord& tx, const std::string& addr) {
  bool in_inputs = false, in_outputs = false;
  for (const TxEntry& e : tx.inputs) in_inputs = in_inputs || e.address == addr;
  for (const TxEntry& e : tx.outputs) in_outputs = in_outputs || e.address == addr;
  if (tx.is_coinbase && in_outputs) return NaiveRole::Coinbase;
  if (in_inputs && in_outputs) return NaiveRole::Payback;
  if (in_inputs) return NaiveRole::Spent;
  return NaiveRole::Received;
}

double naive_rate(const RateTable& rates, std::int64_t ts) {
  // Floor division so pre-epoch timestamps land on the right day.
  std::int64_t day = ts / 86400;
  if (ts % 86400 != 0 && ts < 0) --day;
  double rate = rates.entries.front().usd_per_btc;
  for (const auto& entry : rates.entries) {
    if (entry.day > day) break;
    rate = entry.usd_per_btc;
  }
  return rate;
}

// Decade exponent e with 10^e <= usd < 10^(e+1), or -100 outside [1e-3, 1e7).
int naive_decade(double usd) {
  static constexpr std::array<double, 11> pow10 = {1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2,
                                                   1e3,  1e4,  1e5,  1e6, 1e7};
  for (int e = 6; e >= -3; --e)
    if (usd >= pow10[static_cast<std::size_t>(e + 3)])
      return usd < pow10[static_cast<std::size_t>(e + 4)] ? e : -100;
  return -100;
}

std::string naive_decade_name(const char* side, int e) {
  const std::string tag = e < 0 ? "em" + std::to_string(-e) : "e" + std::to_string(e);
  return std::string("f_") + side + "_" + tag;
}

void put_moment_family(std::map<std::string, double>& out, const std::string& family,
                       const std::vector<double>& samples) {
  const OracleMoments m = oracle_moments(samples);
  out["m1_" + family] = m.m1;
  out["m2_" + family] = m.m2;
  out["m3_" + family] = m.m3;
  out["m4_" + family] = m.m4;
}

}  // namespace

std::map<std::string, double> oracle_features(const AddressHistory& history,
                                              const RateTable& rates) {
  const std::string& addr = history.address;

  std::vector<double> overall_usd, spent_usd, received_usd, coinbase_usd, payback_usd;
  std::vector<double> intervals, balances_btc, balances_usd, spent_inputs, spent_outputs;
  std::array<std::int64_t, 10> spent_buckets{};
  std::array<std::int64_t, 10> received_buckets{};
  std::int64_t n_spent = 0, n_received = 0, n_coinbase = 0, n_payback = 0;
  std::int64_t t_n_input = 0, t_n_output = 0, t_overall = 0;
  Satoshi spent_sat = 0, received_sat = 0, balance_sat = 0;
  double usd_spent = 0, usd_received = 0, balance_usd = 0;

  for (std::size_t i = 0; i < history.txs.size(); ++i) {
    const TxRecord& tx = history.txs[i];
    Satoshi in_sat = 0, out_sat = 0;
    for (const TxEntry& e : tx.inputs)
      if (e.address == addr) in_sat += e.value;
    for (const TxEntry& e : tx.outputs)
      if (e.address == addr) out_sat += e.value;
    const double rate = naive_rate(rates, tx.timestamp);
    const double in_usd = static_cast<double>(in_sat) / 1e8 * rate;
    const double out_usd = static_cast<double>(out_sat) / 1e8 * rate;

    if (i > 0)
      intervals.push_back(
          static_cast<double>(tx.timestamp - history.txs[i - 1].timestamp) / 86400.0);

    spent_sat += in_sat;
    received_sat += out_sat;
    usd_spent += in_usd;
    usd_received += out_usd;
    balance_sat += out_sat - in_sat;
    balance_usd += static_cast<double>(out_sat - in_sat) / 1e8 * rate;
    balances_btc.push_back(static_cast<double>(balance_sat) / 1e8);
    balances_usd.push_back(balance_usd);
    overall_usd.push_back(static_cast<double>(in_sat + out_sat) / 1e8 * rate);

    if (tx.inputs.size() >= 2) ++t_n_input;
    if (tx.outputs.size() >= 2) ++t_n_output;
    if (tx.inputs.size() >= 2 && tx.outputs.size() >= 2) ++t_overall;

    switch (naive_role(tx, addr)) {
      case NaiveRole::Spent: {
        ++n_spent;
        spent_usd.push_back(in_usd);
        if (in_usd > 0) {
          const int e = naive_decade(in_usd);
          if (e != -100) ++spent_buckets[static_cast<std::size_t>(e + 3)];
        }
        spent_inputs.push_back(static_cast<double>(tx.inputs.size()));
        spent_outputs.push_back(static_cast<double>(tx.outputs.size()));
        break;
      }
      case NaiveRole::Received: {
        ++n_received;
        received_usd.push_back(out_usd);
        if (out_usd > 0) {
          const int e = naive_decade(out_usd);
          if (e != -100) ++received_buckets[static_cast<std::size_t>(e + 3)];
        }
        break;
      }
      case NaiveRole::Coinbase:
        ++n_coinbase;
        coinbase_usd.push_back(out_usd);
        break;
      case NaiveRole::Payback:
        ++n_payback;
        payback_usd.push_back(static_cast<double>(std::llabs(out_sat - in_sat)) / 1e8 *
                              rate);
        break;
    }
  }

  const double n_tx = static_cast<double>(history.txs.size());
  const double lifetime =
      static_cast<double>(history.txs.back().timestamp - history.txs.front().timestamp) /
      86400.0;

  std::map<std::string, double> out;
  out["f_tx"] = n_tx / std::max(lifetime, 1.0);
  out["r_received"] = static_cast<double>(n_received) / n_tx;
  out["r_coinbase"] = static_cast<double>(n_coinbase) / n_tx;
  out["r_payback"] = static_cast<double>(n_payback) / n_tx;
  const double spent_denom = static_cast<double>(std::max<std::int64_t>(n_spent, 1));
  const double received_denom =
      static_cast<double>(std::max<std::int64_t>(n_received, 1));
  for (int e = -3; e <= 6; ++e) {
    out[naive_decade_name("spent", e)] =
        static_cast<double>(spent_buckets[static_cast<std::size_t>(e + 3)]) / spent_denom;
    out[naive_decade_name("received", e)] =
        static_cast<double>(received_buckets[static_cast<std::size_t>(e + 3)]) /
        received_denom;
  }
  out["avg_n_inputs"] = mean_of(spent_inputs);
  out["avg_n_outputs"] = mean_of(spent_outputs);
  out["std_n_inputs"] = std::sqrt(pop_var_of(spent_inputs));
  out["std_n_outputs"] = std::sqrt(pop_var_of(spent_outputs));
  out["lifetime"] = lifetime;
  out["btc_spent"] = static_cast<double>(spent_sat) / 1e8;
  out["btc_received"] = static_cast<double>(received_sat) / 1e8;
  out["usd_spent"] = usd_spent;
  out["usd_received"] = usd_received;
  out["n_tx"] = n_tx;
  out["n_spent"] = static_cast<double>(n_spent);
  out["n_received"] = static_cast<double>(n_received);
  out["n_coinbase"] = static_cast<double>(n_coinbase);
  out["n_payback"] = static_cast<double>(n_payback);
  out["mean_balance_btc"] = mean_of(balances_btc);
  out["std_balance_btc"] = std::sqrt(pop_var_of(balances_btc));
  out["mean_balance_usd"] = mean_of(balances_usd);
  out["std_balance_usd"] = std::sqrt(pop_var_of(balances_usd));
  put_moment_family(out, "overall", overall_usd);
  put_moment_family(out, "spent", spent_usd);
  put_moment_family(out, "received", received_usd);
  put_moment_family(out, "coinbase", coinbase_usd);
  put_moment_family(out, "payback", payback_usd);
  put_moment_family(out, "interval", intervals);
  out["t_n_input"] = static_cast<double>(t_n_input);
  out["t_n_output"] = static_cast<double>(t_n_output);
  out["t_overall"] = static_cast<double>(t_overall);
  return out;
}

}  // namespace qubosel::testing
