#include "qubosel/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "qubosel/errors.hpp"

namespace qubosel {

namespace {

std::string trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

template <typename T>
T parse_number(const std::string& value, const std::string& where) {
  T out{};
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end)
    throw InvalidConfigError(where + ": bad number \"" + value + "\"");
  return out;
}

bool parse_bool(const std::string& value, const std::string& where) {
  std::string v = value;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidConfigError(where + ": bad boolean \"" + value + "\"");
}

std::vector<std::string> parse_name_list(const std::string& value) {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::string item =
        trim(std::string_view(value).substr(start, comma == std::string::npos
                                                       ? std::string::npos
                                                       : comma - start));
    if (!item.empty()) names.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return names;
}

}  // namespace

void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                        const std::string& value, const std::string& where) {
  if (key == "transactions") {
    cfg.transactions = value;
  } else if (key == "labels") {
    cfg.labels = value;
  } else if (key == "rates") {
    cfg.rates = value;
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "target_class") {
    try {
      cfg.target_class = parse_address_class(value);
    } catch (const UnknownLabelError& e) {
      throw InvalidConfigError(where + ": " + e.what());
    }
  } else if (key == "alpha") {
    cfg.alpha = parse_number<double>(value, where);
  } else if (key == "solver") {
    if (value == "sa")
      cfg.solver = SolverKind::SA;
    else if (value == "exhaustive")
      cfg.solver = SolverKind::Exhaustive;
    else if (value == "subset")
      cfg.solver = SolverKind::NamedSubset;
    else
      throw InvalidConfigError(where + ": solver must be sa, exhaustive or subset, got \"" +
                               value + "\"");
  } else if (key == "subset") {
    cfg.subset_path = value;
  } else if (key == "beta_start") {
    cfg.schedule.beta_start = parse_number<double>(value, where);
  } else if (key == "beta_end") {
    cfg.schedule.beta_end = parse_number<double>(value, where);
  } else if (key == "sweeps") {
    cfg.schedule.sweeps = parse_number<int>(value, where);
  } else if (key == "restarts") {
    cfg.schedule.restarts = parse_number<int>(value, where);
  } else if (key == "n_trees") {
    cfg.forest.n_trees = parse_number<int>(value, where);
  } else if (key == "max_depth") {
    const int depth = parse_number<int>(value, where);
    if (depth == 0)
      cfg.forest.max_depth.reset();
    else
      cfg.forest.max_depth = depth;
  } else if (key == "min_samples_split") {
    cfg.forest.min_samples_split = parse_number<int>(value, where);
  } else if (key == "features_per_split") {
    if (value == "sqrt")
      cfg.forest.features_per_split.reset();
    else
      cfg.forest.features_per_split = parse_number<int>(value, where);
  } else if (key == "bootstrap") {
    cfg.forest.bootstrap = parse_bool(value, where);
  } else if (key == "folds") {
    cfg.folds = parse_number<int>(value, where);
  } else if (key == "history_cap") {
    cfg.history_cap = parse_number<int>(value, where);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(value, where);
  } else if (key == "threads") {
    cfg.threads = parse_number<int>(value, where);
  } else if (key == "addresses_per_class") {
    cfg.synth.addresses_per_class = parse_number<int>(value, where);
  } else if (key == "tx_count_min") {
    cfg.synth.tx_count_min = parse_number<int>(value, where);
  } else if (key == "tx_count_max") {
    cfg.synth.tx_count_max = parse_number<int>(value, where);
  } else if (key == "planted_features") {
    cfg.synth.planted_informative_features = parse_name_list(value);
  } else if (key == "class_separation") {
    cfg.synth.class_separation = parse_number<double>(value, where);
  } else {
    throw InvalidConfigError(where + ": unknown key \"" + key + "\"");
  }
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfigError(path + ": cannot open");
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw InvalidConfigError(where + ": expected key = value");
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = unquote(trim(std::string_view(stripped).substr(eq + 1)));
    if (key.empty()) throw InvalidConfigError(where + ": empty key");
    apply_config_entry(cfg, key, value, where);
  }
  return cfg;
}

}  // namespace qubosel
