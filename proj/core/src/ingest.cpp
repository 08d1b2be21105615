#include "qubosel/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "qubosel/errors.hpp"

namespace qubosel {

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

[[noreturn]] void parse_fail(const std::string& what, const std::string& where,
                             std::size_t line) {
  throw ParseError(where + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Satoshi parse_btc_decimal(std::string_view text) {
  if (!text.empty() && text.front() == '-')
    throw InvariantError("negative value_btc: \"" + std::string(text) + "\"");
  const std::size_t dot = text.find('.');
  const std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (int_part.empty() || (dot != std::string_view::npos && frac_part.empty()))
    throw ParseError("malformed decimal: \"" + std::string(text) + "\"");
  if (frac_part.size() > 8)
    throw ParseError("more than 8 fractional digits: \"" + std::string(text) + "\"");
  auto all_digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
  };
  if (!all_digits(int_part) || !all_digits(frac_part))
    throw ParseError("malformed decimal: \"" + std::string(text) + "\"");

  std::int64_t whole = 0;
  auto [p, ec] = std::from_chars(int_part.data(), int_part.data() + int_part.size(), whole);
  if (ec != std::errc() || whole > (INT64_MAX / kSatoshiPerBtc))
    throw ParseError("value_btc out of range: \"" + std::string(text) + "\"");

  std::int64_t frac = 0;
  for (char c : frac_part) frac = frac * 10 + (c - '0');
  for (std::size_t i = frac_part.size(); i < 8; ++i) frac *= 10;
  return whole * kSatoshiPerBtc + frac;
}

std::string format_btc_decimal(Satoshi value) {
  const Satoshi whole = value / kSatoshiPerBtc;
  Satoshi frac = value % kSatoshiPerBtc;
  std::string out = std::to_string(whole);
  if (frac != 0) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%08lld", static_cast<long long>(frac));
    std::string digits(buf);
    while (digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

std::int64_t day_of_timestamp(std::int64_t unix_ts) {
  std::int64_t day = unix_ts / 86400;
  if (unix_ts % 86400 < 0) --day;
  return day;
}

std::int64_t parse_date(std::string_view date) {
  auto bad = [&] {
    throw ParseError("malformed date (want YYYY-MM-DD): \"" + std::string(date) + "\"");
  };
  if (date.size() != 10 || date[4] != '-' || date[7] != '-') bad();
  auto num = [&](std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) bad();
    return v;
  };
  const int y = num(date.substr(0, 4));
  const unsigned m = static_cast<unsigned>(num(date.substr(5, 2)));
  const unsigned d = static_cast<unsigned>(num(date.substr(8, 2)));
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) bad();
  return std::chrono::sys_days(ymd).time_since_epoch().count();
}

double rate_at(const RateTable& table, std::int64_t unix_ts) {
  if (table.entries.empty()) throw EmptyTableError("rate table is empty");
  const std::int64_t day = day_of_timestamp(unix_ts);
  auto it = std::upper_bound(table.entries.begin(), table.entries.end(), day,
                             [](std::int64_t d, const RateTable::Entry& e) { return d < e.day; });
  if (it == table.entries.begin()) return table.entries.front().usd_per_btc;
  return std::prev(it)->usd_per_btc;
}

RateTable load_rates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open rates file: " + path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(path + ": empty rates file");
  ++line_no;
  if (strip_cr(line) != "date,usd_per_btc")
    parse_fail("expected header \"date,usd_per_btc\"", path, line_no);

  RateTable table;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) parse_fail("expected date,usd_per_btc", path, line_no);
    RateTable::Entry e;
    e.date = line.substr(0, comma);
    e.day = parse_date(e.date);
    const std::string rate_text = line.substr(comma + 1);
    try {
      std::size_t used = 0;
      e.usd_per_btc = std::stod(rate_text, &used);
      if (used != rate_text.size()) throw std::invalid_argument(rate_text);
    } catch (const std::exception&) {
      parse_fail("malformed rate: \"" + rate_text + "\"", path, line_no);
    }
    if (!std::isfinite(e.usd_per_btc) || e.usd_per_btc <= 0)
      throw NonPositiveRateError(path + ":" + std::to_string(line_no) +
                                 ": usd_per_btc must be > 0, got " + rate_text);
    if (!table.entries.empty() && e.day <= table.entries.back().day)
      throw NonMonotonicDatesError(path + ":" + std::to_string(line_no) +
                                   ": dates must be strictly ascending at " + e.date);
    table.entries.push_back(std::move(e));
  }
  if (table.entries.empty()) throw EmptyTableError(path + ": no rate rows");
  return table;
}

LabelMap load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open labels file: " + path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(path + ": empty labels file");
  ++line_no;
  if (strip_cr(line) != "address,label")
    parse_fail("expected header \"address,label\"", path, line_no);

  LabelMap labels;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos || comma == 0)
      parse_fail("expected address,label", path, line_no);
    std::string address = line.substr(0, comma);
    AddressClass cls;
    try {
      cls = parse_address_class(line.substr(comma + 1));
    } catch (const UnknownLabelError& e) {
      throw UnknownLabelError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    auto [it, inserted] = labels.emplace(std::move(address), cls);
    if (!inserted && it->second != cls)
      throw DuplicateAddressError(path + ":" + std::to_string(line_no) +
                                  ": address \"" + it->first +
                                  "\" re-listed with a different label");
  }
  return labels;
}

namespace {

Satoshi entry_value_from_json(const nlohmann::json& v, const std::string& path,
                              std::size_t line) {
  if (v.is_string()) {
    try {
      return parse_btc_decimal(v.get_ref<const std::string&>());
    } catch (const ParseError& e) {
      parse_fail(e.what(), path, line);
    }
    // InvariantError propagates with context added by the caller's frame below.
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (x < 0) throw InvariantError("negative value_btc");
    const double scaled = x * 1e8;
    const double rounded = std::nearbyint(scaled);
    if (!std::isfinite(scaled) || rounded > 9.0e18 ||
        std::fabs(scaled - rounded) > 1e-3)
      parse_fail("value_btc has more than 8 fractional digits or is out of range",
                 path, line);
    return static_cast<Satoshi>(rounded);
  }
  parse_fail("value_btc must be a number or decimal string", path, line);
}

std::vector<TxEntry> entries_from_json(const nlohmann::json& arr, const char* side,
                                       const std::string& path, std::size_t line) {
  if (!arr.is_array()) parse_fail(std::string(side) + " must be an array", path, line);
  std::vector<TxEntry> out;
  out.reserve(arr.size());
  for (const auto& item : arr) {
    if (!item.is_object() || !item.contains("address") || !item.contains("value_btc") ||
        !item["address"].is_string())
      parse_fail(std::string(side) + " entries need string address and value_btc", path,
                 line);
    TxEntry e;
    e.address = item["address"].get<std::string>();
    try {
      e.value = entry_value_from_json(item["value_btc"], path, line);
    } catch (const InvariantError& err) {
      throw InvariantError(path + ":" + std::to_string(line) + ": " + err.what());
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

TxStream::TxStream(const std::string& path) : path_(path), in_(path) {
  if (!in_) throw ParseError("cannot open transactions file: " + path);
}

std::optional<TxRecord> TxStream::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    line = strip_cr(line);
    if (line.empty()) continue;

    const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      parse_fail("malformed JSON object", path_, line_);
    for (const char* key : {"txid", "block_height", "timestamp", "is_coinbase",
                            "inputs", "outputs"})
      if (!j.contains(key))
        parse_fail(std::string("missing field \"") + key + "\"", path_, line_);
    if (!j["txid"].is_string() || !j["block_height"].is_number_integer() ||
        !j["timestamp"].is_number_integer() || !j["is_coinbase"].is_boolean())
      parse_fail("bad field types", path_, line_);

    TxRecord tx;
    tx.txid = j["txid"].get<std::string>();
    tx.block_height = j["block_height"].get<std::int64_t>();
    tx.timestamp = j["timestamp"].get<std::int64_t>();
    tx.is_coinbase = j["is_coinbase"].get<bool>();
    tx.inputs = entries_from_json(j["inputs"], "inputs", path_, line_);
    tx.outputs = entries_from_json(j["outputs"], "outputs", path_, line_);

    if (tx.block_height < 0)
      throw InvariantError(path_ + ":" + std::to_string(line_) +
                           ": negative block_height");
    if (tx.is_coinbase && !tx.inputs.empty())
      throw InvariantError(path_ + ":" + std::to_string(line_) +
                           ": coinbase tx must have no inputs");
    if (!tx.is_coinbase && tx.inputs.empty())
      throw InvariantError(path_ + ":" + std::to_string(line_) +
                           ": non-coinbase tx must have inputs");
    return tx;
  }
  return std::nullopt;
}

std::vector<TxRecord> load_transactions(const std::string& path) {
  TxStream stream(path);
  std::vector<TxRecord> out;
  while (auto tx = stream.next()) out.push_back(std::move(*tx));
  return out;
}

namespace {

std::vector<AddressHistory> assemble_histories(
    std::unordered_map<std::string, std::vector<TxRecord>>&& by_address,
    const LabelMap& labels, std::size_t history_cap) {
  std::vector<AddressHistory> out;
  out.reserve(by_address.size());
  for (auto& [address, txs] : by_address) {
    std::sort(txs.begin(), txs.end(), [](const TxRecord& a, const TxRecord& b) {
      if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
      return a.txid < b.txid;
    });
    if (txs.size() > history_cap) txs.resize(history_cap);
    AddressHistory h;
    h.address = address;
    h.label = labels.at(address);
    h.txs = std::move(txs);
    out.push_back(std::move(h));
  }
  std::sort(out.begin(), out.end(),
            [](const AddressHistory& a, const AddressHistory& b) {
              return a.address < b.address;
            });
  return out;
}

void collect(const TxRecord& tx, const LabelMap& labels,
             std::unordered_map<std::string, std::vector<TxRecord>>& by_address) {
  std::set<std::string_view> seen;
  auto visit = [&](const TxEntry& e) {
    if (!seen.insert(e.address).second) return;
    if (labels.count(e.address)) by_address[e.address].push_back(tx);
  };
  for (const TxEntry& e : tx.inputs) visit(e);
  for (const TxEntry& e : tx.outputs) visit(e);
}

}  // namespace

std::vector<AddressHistory> build_histories(TxStream& stream, const LabelMap& labels,
                                            std::size_t history_cap) {
  std::unordered_map<std::string, std::vector<TxRecord>> by_address;
  while (auto tx = stream.next()) collect(*tx, labels, by_address);
  return assemble_histories(std::move(by_address), labels, history_cap);
}

std::vector<AddressHistory> build_histories(const std::vector<TxRecord>& txs,
                                            const LabelMap& labels,
                                            std::size_t history_cap) {
  std::unordered_map<std::string, std::vector<TxRecord>> by_address;
  for (const TxRecord& tx : txs) collect(tx, labels, by_address);
  return assemble_histories(std::move(by_address), labels, history_cap);
}

}  // namespace qubosel
