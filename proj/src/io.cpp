#include "fairprice/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace fairprice {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return fields;
    start = pos + 1;
  }
}

// Non-empty lines with their 1-based line numbers.
std::vector<std::pair<int, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<int, std::string_view>> out;
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::string_view line = trim(text.substr(start, end == std::string_view::npos ? text.size() - start : end - start));
    ++number;
    if (!line.empty()) out.emplace_back(number, line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

[[noreturn]] void fail_line(int line, const std::string& message) {
  throw FormatError("line " + std::to_string(line) + ": " + message);
}

double parse_double(std::string_view field, int line, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
    fail_line(line, std::string("malformed ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

int parse_int(std::string_view field, int line, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    fail_line(line, std::string("malformed ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

TossPath parse_prefix(std::string_view field, int line) {
  try {
    return TossPath::parse(field);
  } catch (const std::exception& e) {
    fail_line(line, e.what());
  }
}

void expect_header(const std::vector<std::pair<int, std::string_view>>& lines, std::string_view header) {
  if (lines.empty()) throw FormatError("empty CSV: expected header '" + std::string(header) + "'");
  std::string normalized;
  for (auto field : split(lines.front().second, ',')) {
    if (!normalized.empty()) normalized += ',';
    normalized += field;
  }
  if (normalized != header) fail_line(lines.front().first, "expected header '" + std::string(header) + "'");
}

double required_number(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("invalid config: missing key '") + key + "'");
  const json& value = j.at(key);
  if (!value.is_number()) throw FormatError(std::string("invalid config: '") + key + "' must be a number");
  return value.get<double>();
}

}  // namespace

MarketConfig parse_market_config(std::string_view json_text, int horizon_cap) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid config: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("invalid config: expected a JSON object");

  MarketConfig config;
  config.params.u = required_number(j, "u");
  config.params.d = required_number(j, "d");
  config.params.v = required_number(j, "v");
  config.params.r = required_number(j, "r");
  config.params.p = required_number(j, "p");
  if (!j.contains("horizon")) throw FormatError("invalid config: missing key 'horizon'");
  if (!j.at("horizon").is_number_integer()) throw FormatError("invalid config: 'horizon' must be an integer");
  config.horizon = j.at("horizon").get<int>();

  try {
    validate(config.params);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid config: ") + e.what());
  }
  if (config.horizon < 1) throw FormatError("invalid config: requires horizon >= 1");
  if (config.horizon > horizon_cap) {
    throw FormatError("invalid config: requires horizon <= " + std::to_string(horizon_cap));
  }
  return config;
}

std::string market_config_to_json(const MarketConfig& config) {
  json j{{"u", config.params.u}, {"d", config.params.d}, {"v", config.params.v},
         {"r", config.params.r}, {"p", config.params.p}, {"horizon", config.horizon}};
  return j.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
}

std::string format_shortest(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(x);
}

std::string format_report(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x == 0.0 ? 0.0 : x);  // no "-0"
  return buf;
}

void write_portfolio_csv(std::ostream& out, const Portfolio& p) {
  out << "time,prefix,asset,quantity\n";
  for (int n = 1; n <= p.horizon(); ++n) {
    const std::size_t nodes = BinaryLattice::node_count(n - 1);
    for (std::size_t i = 0; i < nodes; ++i) {
      const std::string prefix = TossPath::from_index(i, n - 1).to_string();
      for (const auto& [asset, quantity] : p.components()) {
        out << (n - 1) << ',' << prefix << ',' << asset << ',' << format_shortest(quantity.level(n)[i]) << '\n';
      }
    }
  }
}

QuantityTable read_portfolio_csv(std::string_view text, int horizon) {
  check_horizon(horizon, kMaxHorizon);
  const auto lines = lines_of(text);
  expect_header(lines, "time,prefix,asset,quantity");

  const std::size_t paths = BinaryLattice::node_count(horizon);
  QuantityTable table{horizon, {}};
  std::map<std::string, std::vector<std::vector<char>>> assigned;

  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto [line, content] = lines[k];
    const auto fields = split(content, ',');
    if (fields.size() != 4) fail_line(line, "expected 4 fields, got " + std::to_string(fields.size()));
    const int time = parse_int(fields[0], line, "time");
    if (time < 0 || time >= horizon) {
      fail_line(line, "time " + std::to_string(time) + " outside 0.." + std::to_string(horizon - 1));
    }
    const TossPath prefix = parse_prefix(fields[1], line);
    if (prefix.size() < time || prefix.size() > horizon) {
      fail_line(line, "prefix length must lie between the time and the horizon");
    }
    const std::string asset(fields[2]);
    if (asset.empty()) fail_line(line, "empty asset id");
    const double quantity = parse_double(fields[3], line, "quantity");

    auto [it, inserted] = table.quantities.try_emplace(asset);
    if (inserted) {
      it->second.assign(static_cast<std::size_t>(horizon), std::vector<double>(paths, 0.0));
      assigned[asset].assign(static_cast<std::size_t>(horizon), std::vector<char>(paths, 0));
    }
    auto& cells = it->second[static_cast<std::size_t>(time)];
    auto& seen = assigned[asset][static_cast<std::size_t>(time)];
    const int shift = horizon - prefix.size();
    const std::size_t first = static_cast<std::size_t>(prefix.index()) << shift;
    const std::size_t last = (static_cast<std::size_t>(prefix.index()) + 1) << shift;
    for (std::size_t j = first; j < last; ++j) {
      if (seen[j] && cells[j] != quantity) {
        fail_line(line, "contradicts an earlier row for asset '" + asset + "' at time " + std::to_string(time));
      }
      cells[j] = quantity;
      seen[j] = 1;
    }
  }
  return table;
}

void write_tree_csv(std::ostream& out, const LatticeProcess& values) {
  out << "time,prefix,value\n";
  for (int n = 0; n <= values.horizon(); ++n) {
    const auto level = values.level(n);
    for (std::size_t i = 0; i < level.size(); ++i) {
      out << n << ',' << TossPath::from_index(i, n).to_string() << ',' << format_shortest(level[i]) << '\n';
    }
  }
}

std::vector<double> read_path_table_csv(std::string_view text, int maturity) {
  check_horizon(maturity, kMaxHorizon);
  const auto lines = lines_of(text);
  expect_header(lines, "prefix,value");
  const std::size_t paths = BinaryLattice::node_count(maturity);
  std::vector<double> payoff(paths, 0.0);
  std::vector<char> seen(paths, 0);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto [line, content] = lines[k];
    const auto fields = split(content, ',');
    if (fields.size() != 2) fail_line(line, "expected 2 fields, got " + std::to_string(fields.size()));
    const TossPath path = parse_prefix(fields[0], line);
    if (path.size() != maturity) fail_line(line, "path must have exactly " + std::to_string(maturity) + " tosses");
    if (seen[path.index()]) fail_line(line, "duplicate path " + path.to_string());
    seen[path.index()] = 1;
    payoff[path.index()] = parse_double(fields[1], line, "value");
  }
  for (std::size_t i = 0; i < paths; ++i) {
    if (!seen[i]) throw FormatError("path table is missing path " + TossPath::from_index(i, maturity).to_string());
  }
  return payoff;
}

}  // namespace fairprice
