#include "qubosel/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

#include "qubosel/errors.hpp"

namespace qubosel {

namespace {

std::string decade_suffix(int exponent) {
  return exponent < 0 ? "em" + std::to_string(-exponent) : "e" + std::to_string(exponent);
}

constexpr const char* kMomentFamilies[] = {"overall",  "spent",   "received",
                                           "coinbase", "payback", "interval"};

std::array<std::string, kFeatureCount> make_feature_names() {
  std::vector<std::string> names;
  names.reserve(kFeatureCount);
  names.insert(names.end(), {"f_tx", "r_received", "r_coinbase"});
  for (int i = -3; i <= 6; ++i) names.push_back("f_spent_" + decade_suffix(i));
  for (int i = -3; i <= 6; ++i) names.push_back("f_received_" + decade_suffix(i));
  names.insert(names.end(), {"r_payback", "avg_n_inputs", "avg_n_outputs"});
  names.insert(names.end(),
               {"lifetime", "btc_spent", "btc_received", "usd_spent", "usd_received"});
  names.insert(names.end(), {"n_tx", "n_spent", "n_received", "n_coinbase", "n_payback"});
  names.insert(names.end(), {"mean_balance_btc", "std_balance_btc", "mean_balance_usd",
                             "std_balance_usd"});
  names.insert(names.end(), {"std_n_inputs", "std_n_outputs"});
  for (const char* family : kMomentFamilies)
    for (int k = 1; k <= 4; ++k)
      names.push_back("m" + std::to_string(k) + "_" + family);
  names.insert(names.end(), {"t_n_input", "t_n_output", "t_overall"});

  std::array<std::string, kFeatureCount> out;
  std::move(names.begin(), names.end(), out.begin());
  return out;
}

}  // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = make_feature_names();
  return names;
}

std::size_t feature_index(std::string_view name) {
  static const std::unordered_map<std::string_view, std::size_t> index = [] {
    std::unordered_map<std::string_view, std::size_t> m;
    const auto& names = feature_names();
    for (std::size_t i = 0; i < names.size(); ++i) m.emplace(names[i], i);
    return m;
  }();
  auto it = index.find(name);
  if (it == index.end())
    throw UnknownFeatureNameError("unknown feature name: \"" + std::string(name) + "\"");
  return it->second;
}

std::optional<int> decade_bucket(double usd_amount) {
  if (!(usd_amount > 0))
    throw NonPositiveAmountError("decade bucket of non-positive amount");
  static constexpr std::array<double, 11> edges = {1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2,
                                                   1e3,  1e4,  1e5,  1e6, 1e7};
  if (usd_amount < edges.front() || usd_amount >= edges.back()) return std::nullopt;
  for (int k = 1; k <= 10; ++k)
    if (usd_amount < edges[static_cast<std::size_t>(k)]) return k - 4;
  return std::nullopt;
}

void RunningMoments::add(double x) {
  const double n_prev = static_cast<double>(n_);
  ++n_;
  const double n = static_cast<double>(n_);
  const double delta = x - mean_;
  const double delta_n = delta / n;
  const double delta_n2 = delta_n * delta_n;
  const double term1 = delta * delta_n * n_prev;
  mean_ += delta_n;
  m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ -
         4.0 * delta_n * m3_;
  m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
  m2_ += term1;
}

Moments RunningMoments::finalize() const {
  Moments m;
  if (n_ == 0) return m;
  const double n = static_cast<double>(n_);
  m.m1 = mean_;
  m.m2 = m2_ / n;
  if (m.m2 > 0) {
    const double sigma = std::sqrt(m.m2);
    m.m3 = (m3_ / n) / (sigma * sigma * sigma);
    m.m4 = (m4_ / n) / (m.m2 * m.m2);
  }
  return m;
}

Moments moments(std::span<const double> samples) {
  RunningMoments acc;
  for (double x : samples) acc.add(x);
  return acc.finalize();
}

FeatureVector extract_features(const AddressHistory& history, const RateTable& rates) {
  if (history.txs.empty())
    throw EmptyHistoryError("empty history for address \"" + history.address + "\"");

  const std::string& addr = history.address;

  std::int64_t n_tx = 0, n_spent = 0, n_received = 0, n_coinbase = 0, n_payback = 0;
  std::int64_t t_n_input = 0, t_n_output = 0, t_overall = 0;
  Satoshi spent_sat = 0, received_sat = 0, balance_sat = 0;
  double usd_spent = 0, usd_received = 0, balance_usd = 0;
  std::array<std::int64_t, 10> spent_buckets{};
  std::array<std::int64_t, 10> received_buckets{};
  RunningMoments m_overall, m_spent, m_received, m_coinbase, m_payback, m_interval;
  RunningMoments balance_btc_stats, balance_usd_stats, inputs_stats, outputs_stats;
  std::int64_t first_ts = 0, last_ts = 0, prev_ts = 0;

  for (const TxRecord& tx : history.txs) {
    const TxRole role = classify_role(tx, addr);
    const Satoshi in_sat = tx.input_value(addr);
    const Satoshi out_sat = tx.output_value(addr);
    const double rate = rate_at(rates, tx.timestamp);

    if (n_tx == 0)
      first_ts = tx.timestamp;
    else
      m_interval.add(static_cast<double>(tx.timestamp - prev_ts) / 86400.0);
    prev_ts = tx.timestamp;
    last_ts = tx.timestamp;
    ++n_tx;

    spent_sat += in_sat;
    received_sat += out_sat;
    usd_spent += to_btc(in_sat) * rate;
    usd_received += to_btc(out_sat) * rate;
    balance_sat += out_sat - in_sat;
    balance_usd += to_btc(out_sat - in_sat) * rate;
    balance_btc_stats.add(to_btc(balance_sat));
    balance_usd_stats.add(balance_usd);
    m_overall.add(to_btc(in_sat + out_sat) * rate);

    if (tx.inputs.size() >= 2) ++t_n_input;
    if (tx.outputs.size() >= 2) ++t_n_output;
    if (tx.inputs.size() >= 2 && tx.outputs.size() >= 2) ++t_overall;

    switch (role) {
      case TxRole::Spent: {
        ++n_spent;
        const double usd = to_btc(in_sat) * rate;
        m_spent.add(usd);
        if (usd > 0)
          if (auto bucket = decade_bucket(usd))
            ++spent_buckets[static_cast<std::size_t>(*bucket + 3)];
        inputs_stats.add(static_cast<double>(tx.inputs.size()));
        outputs_stats.add(static_cast<double>(tx.outputs.size()));
        break;
      }
      case TxRole::Received: {
        ++n_received;
        const double usd = to_btc(out_sat) * rate;
        m_received.add(usd);
        if (usd > 0)
          if (auto bucket = decade_bucket(usd))
            ++received_buckets[static_cast<std::size_t>(*bucket + 3)];
        break;
      }
      case TxRole::Coinbase:
        ++n_coinbase;
        m_coinbase.add(to_btc(out_sat) * rate);
        break;
      case TxRole::Payback:
        ++n_payback;
        m_payback.add(to_btc(std::llabs(out_sat - in_sat)) * rate);
        break;
    }
  }

  FeatureVector out;
  auto set = [&out](std::string_view name, double v) { out[feature_index(name)] = v; };

  const double lifetime_days = static_cast<double>(last_ts - first_ts) / 86400.0;
  const double tx_count = static_cast<double>(n_tx);

  set("f_tx", tx_count / std::max(lifetime_days, 1.0));
  set("r_received", static_cast<double>(n_received) / tx_count);
  set("r_coinbase", static_cast<double>(n_coinbase) / tx_count);
  const double spent_denom = static_cast<double>(std::max<std::int64_t>(n_spent, 1));
  const double received_denom = static_cast<double>(std::max<std::int64_t>(n_received, 1));
  for (int i = -3; i <= 6; ++i) {
    const auto b = static_cast<std::size_t>(i + 3);
    set("f_spent_" + decade_suffix(i), static_cast<double>(spent_buckets[b]) / spent_denom);
    set("f_received_" + decade_suffix(i),
        static_cast<double>(received_buckets[b]) / received_denom);
  }
  set("r_payback", static_cast<double>(n_payback) / tx_count);
  set("avg_n_inputs", inputs_stats.mean());
  set("avg_n_outputs", outputs_stats.mean());
  set("lifetime", lifetime_days);
  set("btc_spent", to_btc(spent_sat));
  set("btc_received", to_btc(received_sat));
  set("usd_spent", usd_spent);
  set("usd_received", usd_received);
  set("n_tx", tx_count);
  set("n_spent", static_cast<double>(n_spent));
  set("n_received", static_cast<double>(n_received));
  set("n_coinbase", static_cast<double>(n_coinbase));
  set("n_payback", static_cast<double>(n_payback));
  set("mean_balance_btc", balance_btc_stats.mean());
  set("std_balance_btc", std::sqrt(balance_btc_stats.variance()));
  set("mean_balance_usd", balance_usd_stats.mean());
  set("std_balance_usd", std::sqrt(balance_usd_stats.variance()));
  set("std_n_inputs", std::sqrt(inputs_stats.variance()));
  set("std_n_outputs", std::sqrt(outputs_stats.variance()));

  const RunningMoments* families[] = {&m_overall, &m_spent,   &m_received,
                                      &m_coinbase, &m_payback, &m_interval};
  for (std::size_t f = 0; f < 6; ++f) {
    const Moments m = families[f]->finalize();
    const std::string suffix = std::string("_") + kMomentFamilies[f];
    set("m1" + suffix, m.m1);
    set("m2" + suffix, m.m2);
    set("m3" + suffix, m.m3);
    set("m4" + suffix, m.m4);
  }
  set("t_n_input", static_cast<double>(t_n_input));
  set("t_n_output", static_cast<double>(t_n_output));
  set("t_overall", static_cast<double>(t_overall));
  return out;
}

FeatureTable build_table(std::span<const AddressHistory> histories,
                         const RateTable& rates) {
  FeatureTable table;
  table.names.assign(feature_names().begin(), feature_names().end());
  table.addresses.reserve(histories.size());
  table.labels.reserve(histories.size());
  table.rows.reserve(histories.size());
  for (const AddressHistory& h : histories) {
    if (!h.label.has_value())
      throw InvariantError("address \"" + h.address + "\" has no class label");
    table.addresses.push_back(h.address);
    table.labels.push_back(*h.label);
    const FeatureVector features = extract_features(h, rates);
    table.rows.emplace_back(features.values.begin(), features.values.end());
  }
  return table;
}

FeatureMatrix to_matrix(const FeatureTable& table, AddressClass target_class) {
  if (table.rows.size() < 2)
    throw TooFewSamplesError("need at least 2 feature rows, got " +
                             std::to_string(table.rows.size()));
  FeatureMatrix m;
  m.names = table.names;
  m.target_class = target_class;
  m.rows = table.rows;
  m.outcomes.reserve(table.rows.size());
  std::size_t positives = 0;
  for (AddressClass label : table.labels) {
    const bool is_target = label == target_class;
    m.outcomes.push_back(is_target ? 1 : 0);
    positives += is_target ? 1u : 0u;
  }
  if (positives == 0 || positives == m.rows.size())
    throw DegenerateOutcomeError("outcome column is degenerate: " +
                                 std::to_string(positives) + " of " +
                                 std::to_string(m.rows.size()) + " rows are target class");
  return m;
}

FeatureMatrix build_matrix(std::span<const AddressHistory> histories,
                           const RateTable& rates, AddressClass target_class) {
  return to_matrix(build_table(histories, rates), target_class);
}

}  // namespace qubosel
