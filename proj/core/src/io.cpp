// Copyright 2026 The nbpm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nbpm/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <system_error>
#include <utility>

#include <json.hpp>

#include "nbpm/error.hpp"

namespace nbpm::io {
namespace {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw DomainError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

template <class T>
T get(const Json& j, std::string_view key, std::string_view what) {
  auto it = j.find(std::string(key));
  if (it == j.end()) {
    throw DomainError(std::string(what) + ": missing key '" + std::string(key) + "'");
  }
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw DomainError(std::string(what) + ": bad value for '" + std::string(key) + "'");
  }
}

double get_number(const Json& j, std::string_view key, std::string_view what) {
  auto it = j.find(std::string(key));
  if (it != j.end() && it->is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (it != j.end() && !it->is_number()) {
    throw DomainError(std::string(what) + ": '" + std::string(key) + "' must be a number");
  }
  return get<double>(j, key, what);
}

void reject_unknown(const Json& j, std::initializer_list<std::string_view> known,
                    std::string_view what) {
  if (!j.is_object()) throw DomainError(std::string(what) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || k == key;
    if (!ok) throw DomainError(std::string(what) + ": unknown key '" + key + "'");
  }
}

void check_schema(const Json& j, std::string_view what) {
  const int version = get<int>(j, "schema_version", what);
  if (version != kSchemaVersion) {
    throw DomainError(std::string(what) + ": unsupported schema_version " +
                      std::to_string(version));
  }
}

Json tail_json(const LevyTail& tail) {
  Json j;
  j["kind"] = std::string(to_string(tail.kind()));
  if (tail.kind() == TailKind::gamma) {
    j["theta"] = tail.theta();
  } else {
    j["alpha"] = tail.alpha();
  }
  return j;
}

LevyTail tail_from(const Json& j) {
  reject_unknown(j, {"kind", "alpha", "theta"}, "tail");
  const TailKind kind = tail_kind_from_string(get<std::string>(j, "kind", "tail"));
  switch (kind) {
    case TailKind::stable:
      return LevyTail::stable(get_number(j, "alpha", "tail"));
    case TailKind::gamma:
      return LevyTail::gamma(get_number(j, "theta", "tail"));
    case TailKind::generalized_gamma:
      return LevyTail::generalized_gamma(get_number(j, "alpha", "tail"));
  }
  throw DomainError("tail: unknown kind");
}

Json truncation_json(const TruncationPolicy& p) {
  Json j;
  if (p.mode == TruncationPolicy::Mode::fixed_count) {
    j["mode"] = "fixed";
    j["n"] = p.n;
  } else {
    j["mode"] = "epsilon";
    j["epsilon"] = p.epsilon;
  }
  j["hard_cap"] = p.hard_cap;
  return j;
}

TruncationPolicy truncation_from(const Json& j) {
  reject_unknown(j, {"mode", "n", "epsilon", "hard_cap"}, "truncation");
  const std::string mode = get<std::string>(j, "mode", "truncation");
  const std::size_t cap = j.contains("hard_cap")
                              ? get<std::size_t>(j, "hard_cap", "truncation")
                              : TruncationPolicy{}.hard_cap;
  if (mode == "fixed") {
    return TruncationPolicy::fixed(get<std::size_t>(j, "n", "truncation"), cap);
  }
  if (mode == "epsilon") {
    return TruncationPolicy::relative(get_number(j, "epsilon", "truncation"), cap);
  }
  throw DomainError("truncation: mode must be 'fixed' or 'epsilon'");
}

Json provenance_json(const Provenance& p) {
  Json j;
  j["process"] = p.process;
  j["tail"] = p.tail;
  Json params = Json::object();
  for (const auto& [k, v] : p.parameters) params[k] = v;
  j["parameters"] = std::move(params);
  j["truncation"] = p.truncation ? truncation_json(*p.truncation) : Json();
  j["seed"] = p.seed;
  j["generator_id"] = p.generator_id;
  j["base"] = p.base;
  j["dropped_underflow"] = p.dropped_underflow;
  j["truncation_capped"] = p.truncation_capped;
  return j;
}

Provenance provenance_from(const Json& j) {
  constexpr std::string_view what = "provenance";
  reject_unknown(j,
                 {"process", "tail", "parameters", "truncation", "seed", "generator_id",
                  "base", "dropped_underflow", "truncation_capped"},
                 what);
  Provenance p;
  p.process = get<std::string>(j, "process", what);
  p.tail = get<std::string>(j, "tail", what);
  const Json params = get<Json>(j, "parameters", what);
  if (!params.is_object()) throw DomainError("provenance: parameters must be an object");
  for (const auto& [k, v] : params.items()) p.parameters[k] = get_number(params, k, what);
  const Json trunc = get<Json>(j, "truncation", what);
  if (!trunc.is_null()) p.truncation = truncation_from(trunc);
  p.seed = get<std::uint64_t>(j, "seed", what);
  p.generator_id = get<std::string>(j, "generator_id", what);
  p.base = get<std::string>(j, "base", what);
  p.dropped_underflow = get<std::size_t>(j, "dropped_underflow", what);
  p.truncation_capped = get<bool>(j, "truncation_capped", what);
  return p;
}

Json spec_json(const ExperimentSpec& s) {
  Json params = Json::object();
  if (s.params.alpha) params["alpha"] = *s.params.alpha;
  if (s.params.theta) params["theta"] = *s.params.theta;
  if (s.params.r) params["r"] = *s.params.r;
  params["tail"] = std::string(to_string(s.params.tail));
  params["sticks"] = s.params.sticks;
  params["ranked"] = s.params.ranked;
  Json j;
  j["process"] = std::string(to_string(s.process));
  j["params"] = std::move(params);
  j["replications"] = s.replications;
  j["truncation"] = truncation_json(s.truncation);
  j["master_seed"] = s.master_seed;
  j["parallelism"] = s.parallelism;
  return j;
}

ExperimentSpec spec_from(const Json& j) {
  constexpr std::string_view what = "experiment spec";
  reject_unknown(j,
                 {"schema_version", "process", "params", "replications", "truncation",
                  "master_seed", "parallelism"},
                 what);
  if (j.contains("schema_version")) check_schema(j, what);
  ExperimentSpec s;
  if (j.contains("process")) {
    s.process = process_kind_from_string(get<std::string>(j, "process", what));
  }
  if (j.contains("params")) {
    const Json& p = j.at("params");
    reject_unknown(p, {"alpha", "theta", "r", "tail", "sticks", "ranked"}, "params");
    if (p.contains("alpha")) s.params.alpha = get_number(p, "alpha", "params");
    if (p.contains("theta")) s.params.theta = get_number(p, "theta", "params");
    if (p.contains("r")) s.params.r = get_number(p, "r", "params");
    if (p.contains("tail")) {
      s.params.tail = tail_kind_from_string(get<std::string>(p, "tail", "params"));
    }
    if (p.contains("sticks")) s.params.sticks = get<std::size_t>(p, "sticks", "params");
    if (p.contains("ranked")) s.params.ranked = get<bool>(p, "ranked", "params");
  }
  if (j.contains("replications")) {
    s.replications = get<std::size_t>(j, "replications", what);
  }
  if (j.contains("truncation")) s.truncation = truncation_from(j.at("truncation"));
  if (j.contains("master_seed")) s.master_seed = get<std::uint64_t>(j, "master_seed", what);
  if (j.contains("parallelism")) s.parallelism = get<unsigned>(j, "parallelism", what);
  return s;
}

void check_line_safe(std::string_view text, std::string_view what) {
  if (text.find_first_of("\r\n") != std::string_view::npos) {
    throw DomainError(std::string(what) + " must not contain line breaks");
  }
}

std::string csv_escape(const std::string& s) {
  check_line_safe(s, "CSV cell");
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw DomainError("CSV: unterminated quote");
  cells.push_back(std::move(cell));
  return cells;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto pos = text.find('\n');
    std::string_view line = text.substr(0, pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return lines;
}

// Splits "# key=value" into its parts; false for other lines.
bool metadata_line(std::string_view line, std::string& key, std::string& value) {
  if (line.size() < 2 || line.substr(0, 2) != "# ") return false;
  line.remove_prefix(2);
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw DomainError("CSV: malformed metadata line");
  key = std::string(line.substr(0, eq));
  value = std::string(line.substr(eq + 1));
  return true;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return Json();  // JSON has no NaN/inf
    return *d;
  }
  return std::get<std::string>(c);
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw NumericError("cannot format double", value);
  return std::string(buf, end);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw DomainError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_uint64(std::string_view text) {
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw DomainError("not an unsigned integer: '" + std::string(text) + "'");
  }
  return value;
}

std::string tail_to_json(const LevyTail& tail) { return tail_json(tail).dump(); }

LevyTail tail_from_json(std::string_view text) {
  return tail_from(parse_json(text, "tail"));
}

std::string truncation_to_json(const TruncationPolicy& policy) {
  return truncation_json(policy).dump();
}

TruncationPolicy truncation_from_json(std::string_view text) {
  return truncation_from(parse_json(text, "truncation"));
}

std::string measure_to_json(const DiscreteMeasure& m) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["atoms"] = m.atoms();
  j["weights"] = m.weights();
  j["sorted_by_weight"] = m.sorted_by_weight();
  j["provenance"] = provenance_json(m.provenance());
  return dump(j);
}

DiscreteMeasure measure_from_json(std::string_view text) {
  constexpr std::string_view what = "measure";
  const Json j = parse_json(text, what);
  reject_unknown(j, {"schema_version", "atoms", "weights", "sorted_by_weight", "provenance"},
                 what);
  check_schema(j, what);
  return DiscreteMeasure(get<std::vector<double>>(j, "atoms", what),
                         get<std::vector<double>>(j, "weights", what),
                         get<bool>(j, "sorted_by_weight", what),
                         provenance_from(get<Json>(j, "provenance", what)));
}

std::string measure_to_csv(const DiscreteMeasure& m) {
  std::string out;
  out += "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
  out += std::string("# sorted_by_weight=") + (m.sorted_by_weight() ? "true" : "false") +
         "\n";
  out += "# provenance=" + provenance_json(m.provenance()).dump() + "\n";
  out += "atom,weight\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += format_double(m.atoms()[i]) + "," + format_double(m.weights()[i]) + "\n";
  }
  return out;
}

DiscreteMeasure measure_from_csv(std::string_view text) {
  std::map<std::string, std::string> meta;
  std::vector<double> atoms;
  std::vector<double> weights;
  bool header = false;
  for (std::string_view line : split_lines(text)) {
    if (line.empty()) continue;
    std::string key;
    std::string value;
    if (!header && metadata_line(line, key, value)) {
      meta[key] = value;
      continue;
    }
    if (!header) {
      if (line != "atom,weight") throw DomainError("measure CSV: bad header");
      header = true;
      continue;
    }
    const auto cells = csv_split(line);
    if (cells.size() != 2) throw DomainError("measure CSV: expected two columns");
    atoms.push_back(parse_double(cells[0]));
    weights.push_back(parse_double(cells[1]));
  }
  if (!header) throw DomainError("measure CSV: missing header");
  if (meta["schema_version"] != std::to_string(kSchemaVersion)) {
    throw DomainError("measure CSV: unsupported schema_version");
  }
  if (!meta.count("provenance")) throw DomainError("measure CSV: missing provenance");
  const std::string& sorted = meta["sorted_by_weight"];
  if (sorted != "true" && sorted != "false") {
    throw DomainError("measure CSV: bad sorted_by_weight");
  }
  return DiscreteMeasure(std::move(atoms), std::move(weights), sorted == "true",
                         provenance_from(parse_json(meta["provenance"], "provenance")));
}

std::string experiment_spec_to_json(const ExperimentSpec& spec,
                                    bool include_parallelism) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  const Json body = spec_json(spec);
  for (const auto& [k, v] : body.items()) j[k] = v;
  if (!include_parallelism) j.erase("parallelism");
  return j.dump();
}

ExperimentSpec experiment_spec_from_json(std::string_view text) {
  return spec_from(parse_json(text, "experiment spec"));
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw DomainError("table has no column '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  throw DomainError("column '" + std::string(name) + "' is not numeric");
}

std::string table_to_json(const Table& table) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = table.kind;
  Json meta = Json::object();
  for (const auto& [k, v] : table.metadata) meta[k] = v;
  j["metadata"] = std::move(meta);
  j["columns"] = table.columns;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw DomainError("table row width mismatch");
    Json r = Json::array();
    for (const Cell& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return dump(j);
}

Table table_from_json(std::string_view text) {
  constexpr std::string_view what = "table";
  const Json j = parse_json(text, what);
  reject_unknown(j, {"schema_version", "kind", "metadata", "columns", "rows"}, what);
  check_schema(j, what);
  Table t;
  t.kind = get<std::string>(j, "kind", what);
  t.metadata = get<std::map<std::string, std::string>>(j, "metadata", what);
  t.columns = get<std::vector<std::string>>(j, "columns", what);
  for (const Json& r : get<Json>(j, "rows", what)) {
    if (!r.is_array() || r.size() != t.columns.size()) {
      throw DomainError("table: row width mismatch");
    }
    std::vector<Cell> row;
    for (const Json& c : r) {
      if (c.is_number_integer()) {
        row.emplace_back(c.get<std::int64_t>());
      } else if (c.is_number()) {
        row.emplace_back(c.get<double>());
      } else if (c.is_null()) {
        row.emplace_back(std::numeric_limits<double>::quiet_NaN());
      } else if (c.is_string()) {
        row.emplace_back(c.get<std::string>());
      } else {
        throw DomainError("table: unsupported cell type");
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string table_to_csv(const Table& table) {
  std::string types;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    char type = 'd';
    for (const auto& row : table.rows) {
      if (row.size() != table.columns.size()) throw DomainError("table row width mismatch");
      const char t = std::holds_alternative<std::int64_t>(row[c])  ? 'i'
                     : std::holds_alternative<double>(row[c])      ? 'd'
                                                                    : 's';
      if (&row == &table.rows.front()) {
        type = t;
      } else if (t != type) {
        throw DomainError("table column '" + table.columns[c] + "' mixes cell types");
      }
    }
    types += (c ? "," : "");
    types += type == 'i' ? "int" : type == 'd' ? "double" : "string";
  }

  std::string out;
  out += "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
  check_line_safe(table.kind, "table kind");
  out += "# kind=" + table.kind + "\n";
  out += "# types=" + types + "\n";
  for (const auto& [k, v] : table.metadata) {
    check_line_safe(k, "metadata key");
    check_line_safe(v, "metadata value");
    if (k.find('=') != std::string::npos) throw DomainError("metadata key contains '='");
    out += "# meta." + k + "=" + v + "\n";
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out += (c ? "," : "") + csv_escape(table.columns[c]);
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      if (const auto* i = std::get_if<std::int64_t>(&row[c])) {
        out += std::to_string(*i);
      } else if (const auto* d = std::get_if<double>(&row[c])) {
        out += format_double(*d);
      } else {
        out += csv_escape(std::get<std::string>(row[c]));
      }
    }
    out += "\n";
  }
  return out;
}

Table table_from_csv(std::string_view text) {
  Table t;
  std::vector<std::string> types;
  bool header = false;
  bool have_schema = false;
  for (std::string_view line : split_lines(text)) {
    if (line.empty()) continue;
    std::string key;
    std::string value;
    if (!header && metadata_line(line, key, value)) {
      if (key == "schema_version") {
        if (value != std::to_string(kSchemaVersion)) {
          throw DomainError("table CSV: unsupported schema_version");
        }
        have_schema = true;
      } else if (key == "kind") {
        t.kind = value;
      } else if (key == "types") {
        types = value.empty() ? std::vector<std::string>{} : csv_split(value);
      } else if (key.rfind("meta.", 0) == 0) {
        t.metadata[key.substr(5)] = value;
      } else {
        throw DomainError("table CSV: unknown metadata '" + key + "'");
      }
      continue;
    }
    if (!header) {
      t.columns = csv_split(line);
      if (types.size() != t.columns.size()) {
        throw DomainError("table CSV: types and header widths differ");
      }
      header = true;
      continue;
    }
    const auto cells = csv_split(line);
    if (cells.size() != t.columns.size()) throw DomainError("table CSV: row width mismatch");
    std::vector<Cell> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (types[c] == "int") {
        std::int64_t v = 0;
        const auto& s = cells[c];
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
          throw DomainError("table CSV: bad integer '" + s + "'");
        }
        row.emplace_back(v);
      } else if (types[c] == "double") {
        row.emplace_back(parse_double(cells[c]));
      } else if (types[c] == "string") {
        row.emplace_back(cells[c]);
      } else {
        throw DomainError("table CSV: unknown column type '" + types[c] + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (!have_schema) throw DomainError("table CSV: missing schema_version");
  if (!header) throw DomainError("table CSV: missing header");
  return t;
}

Table points_table(const PointSequence& points) {
  Table t;
  t.kind = "points";
  t.columns = {"index", "value"};
  for (std::size_t i = 0; i < points.size(); ++i) {
    t.rows.push_back({static_cast<std::int64_t>(i + 1), std::exp(points.log_values[i])});
  }
  return t;
}

}  // namespace nbpm::io
