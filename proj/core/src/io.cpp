#include "qubosel/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qubosel/errors.hpp"

namespace qubosel {

namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest decimal rendering that round-trips the exact double.
std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Fixed 12-significant-digit rendering, the feature CSV contract.
std::string format_sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double parse_double(std::string_view text, const std::string& where) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(where + ": bad number \"" + std::string(text) + "\"");
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

ordered_json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError(tmp + ": write failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw IoError(path + ": rename from temp file failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

// --- feature matrix CSV -----------------------------------------------------

void write_feature_csv(const std::string& path, const FeatureTable& table) {
  std::string out = "address,label";
  for (const std::string& name : table.names) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    out += table.addresses[i];
    out += ',';
    out += to_string(table.labels[i]);
    for (double v : table.rows[i]) {
      out += ',';
      out += format_sig12(v);
    }
    out += '\n';
  }
  write_text_atomic(path, out);
}

FeatureTable read_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  if (header.size() < 3 || header[0] != "address" || header[1] != "label")
    throw ParseError(path + ":1: header must start with address,label");

  FeatureTable table;
  std::set<std::string_view> seen_names;
  for (std::size_t j = 2; j < header.size(); ++j) {
    try {
      feature_index(header[j]);  // canonical-name check
    } catch (const UnknownFeatureNameError& e) {
      throw ParseError(path + ":1: " + e.what());
    }
    if (!seen_names.insert(header[j]).second)
      throw ParseError(path + ":1: duplicate column \"" + std::string(header[j]) + "\"");
    table.names.emplace_back(header[j]);
  }

  const std::size_t width = table.names.size();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 2 + width)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(2 + width) + " fields, got " +
                       std::to_string(fields.size()));
    const std::string where = path + ":" + std::to_string(line_no);
    table.addresses.emplace_back(fields[0]);
    try {
      table.labels.push_back(parse_address_class(fields[1]));
    } catch (const UnknownLabelError& e) {
      throw UnknownLabelError(where + ": " + e.what());
    }
    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j)
      row[j] = parse_double(fields[2 + j], where);
    table.rows.push_back(std::move(row));
  }
  return table;
}

// --- selection result JSON --------------------------------------------------

std::string selection_to_json(const SelectionResult& result) {
  ordered_json j;
  j["solver"] = to_string(result.solver);
  j["alpha"] = result.alpha;
  j["seed"] = result.seed;
  j["schedule"] = {{"beta_start", result.schedule.beta_start},
                   {"beta_end", result.schedule.beta_end},
                   {"sweeps", result.schedule.sweeps},
                   {"restarts", result.schedule.restarts}};
  j["energy"] = result.energy;
  j["wall_time_seconds"] = result.wall_time_seconds;
  j["selected"] = result.selected_names;
  std::string mask;
  mask.reserve(result.mask.size());
  for (std::uint8_t bit : result.mask.bits) mask += bit ? '1' : '0';
  j["mask"] = mask;
  return j.dump(2) + "\n";
}

void write_selection_json(const std::string& path, const SelectionResult& result) {
  write_text_atomic(path, selection_to_json(result));
}

SelectionResult read_selection_json(const std::string& path) {
  const ordered_json j = parse_json_file(path);
  try {
    SelectionResult r;
    const std::string solver = j.at("solver").get<std::string>();
    if (solver == "SA")
      r.solver = SolverKind::SA;
    else if (solver == "Exhaustive")
      r.solver = SolverKind::Exhaustive;
    else if (solver == "NamedSubset")
      r.solver = SolverKind::NamedSubset;
    else
      throw ParseError(path + ": unknown solver \"" + solver + "\"");
    r.alpha = j.at("alpha").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const ordered_json& sched = j.at("schedule");
    r.schedule.beta_start = sched.at("beta_start").get<double>();
    r.schedule.beta_end = sched.at("beta_end").get<double>();
    r.schedule.sweeps = sched.at("sweeps").get<int>();
    r.schedule.restarts = sched.at("restarts").get<int>();
    r.energy = j.at("energy").get<double>();
    r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    r.selected_names = j.at("selected").get<std::vector<std::string>>();
    const std::string mask = j.at("mask").get<std::string>();
    r.mask.bits.reserve(mask.size());
    for (char c : mask) {
      if (c != '0' && c != '1')
        throw ParseError(path + ": mask must be a 0/1 string");
      r.mask.bits.push_back(c == '1' ? 1 : 0);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// --- metrics JSON -----------------------------------------------------------

std::string metrics_to_json(const MetricsReport& report) {
  ordered_json j;
  j["target_class"] = report.target_class;
  j["mask_source"] = report.mask_source;
  j["n_features"] = report.n_features;
  j["precision"] = report.metrics.precision;
  j["recall"] = report.metrics.recall;
  j["f1"] = report.metrics.f1;
  j["accuracy"] = report.metrics.accuracy;
  j["auc"] = report.metrics.auc;
  j["confusion"] = {{report.metrics.confusion[0][0], report.metrics.confusion[0][1]},
                    {report.metrics.confusion[1][0], report.metrics.confusion[1][1]}};
  j["train_time_seconds"] = report.metrics.train_time_seconds;
  return j.dump(2) + "\n";
}

void write_metrics_json(const std::string& path, const MetricsReport& report) {
  write_text_atomic(path, metrics_to_json(report));
}

MetricsReport read_metrics_json(const std::string& path) {
  const ordered_json j = parse_json_file(path);
  try {
    MetricsReport r;
    r.target_class = j.at("target_class").get<std::string>();
    r.mask_source = j.at("mask_source").get<std::string>();
    r.n_features = j.at("n_features").get<int>();
    r.metrics.precision = j.at("precision").get<double>();
    r.metrics.recall = j.at("recall").get<double>();
    r.metrics.f1 = j.at("f1").get<double>();
    r.metrics.accuracy = j.at("accuracy").get<double>();
    r.metrics.auc = j.at("auc").get<double>();
    const ordered_json& confusion = j.at("confusion");
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        r.metrics.confusion[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            confusion.at(static_cast<std::size_t>(a))
                .at(static_cast<std::size_t>(b))
                .get<std::int64_t>();
    r.metrics.train_time_seconds = j.at("train_time_seconds").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// --- evaluation CSVs --------------------------------------------------------

void write_roc_csv(const std::string& path, const std::vector<RocPoint>& points) {
  std::string out = "fpr,tpr,threshold\n";
  for (const RocPoint& p : points) {
    out += format_double(p.fpr);
    out += ',';
    out += format_double(p.tpr);
    out += ',';
    out += format_double(p.threshold);
    out += '\n';
  }
  write_text_atomic(path, out);
}

void write_importances_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, double>>& importances) {
  std::string out = "feature,importance\n";
  for (const auto& [name, weight] : importances) {
    out += name;
    out += ',';
    out += format_double(weight);
    out += '\n';
  }
  write_text_atomic(path, out);
}

// --- dataset writers --------------------------------------------------------

void write_transactions_jsonl(const std::string& path,
                              std::span<const AddressHistory> histories) {
  std::string out;
  std::set<std::string_view> seen;
  for (const AddressHistory& history : histories) {
    for (const TxRecord& tx : history.txs) {
      if (!seen.insert(tx.txid).second) continue;  // shared tx, already written
      ordered_json j;
      j["txid"] = tx.txid;
      j["block_height"] = tx.block_height;
      j["timestamp"] = tx.timestamp;
      j["is_coinbase"] = tx.is_coinbase;
      auto entries = [](const std::vector<TxEntry>& side) {
        ordered_json arr = ordered_json::array();
        for (const TxEntry& e : side)
          arr.push_back({{"address", e.address},
                         {"value_btc", format_btc_decimal(e.value)}});
        return arr;
      };
      j["inputs"] = entries(tx.inputs);
      j["outputs"] = entries(tx.outputs);
      out += j.dump();
      out += '\n';
    }
  }
  write_text_atomic(path, out);
}

void write_labels_csv(const std::string& path,
                      std::span<const AddressHistory> histories) {
  std::string out = "address,label\n";
  for (const AddressHistory& history : histories) {
    if (!history.label.has_value()) continue;
    out += history.address;
    out += ',';
    out += to_string(*history.label);
    out += '\n';
  }
  write_text_atomic(path, out);
}

void write_rates_csv(const std::string& path, const RateTable& rates) {
  std::string out = "date,usd_per_btc\n";
  for (const RateTable::Entry& entry : rates.entries) {
    out += entry.date;
    out += ',';
    out += format_double(entry.usd_per_btc);
    out += '\n';
  }
  write_text_atomic(path, out);
}

}  // namespace qubosel
