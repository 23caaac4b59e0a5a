#include "fitscape/report_schema.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

#include "fitscape/error.hpp"

namespace fitscape::report {

namespace {

using T = ColumnType;

Column text(std::string name, std::vector<std::string> allowed = {}) {
  return {std::move(name), T::Text, false, std::move(allowed)};
}
Column count(std::string name) { return {std::move(name), T::Count, false, {}}; }
Column rate(std::string name, bool nullable = false) {
  return {std::move(name), T::Rate, nullable, {}};
}
Column real(std::string name, bool nullable = false) {
  return {std::move(name), T::Real, nullable, {}};
}
Column corr(std::string name, bool nullable = false) {
  return {std::move(name), T::Correlation, nullable, {}};
}

const std::vector<std::string> kClasses = {"Integer_Integer", "Integer_Zero", "Reference_Reference",
                                           "Reference_Null"};
const std::vector<std::string> kGroups = {"Easy", "Hard", "Search", "RW", "Excluded", "Ungrouped"};
const std::vector<std::string> kExclusions = {"none", "never-reached", "never-covered"};

std::vector<Column> measure_columns(bool nullable) {
  return {corr("ac", nullable), rate("nd", nullable),  rate("nv", nullable),
          rate("ic", nullable), rate("pic", nullable), rate("dbi", nullable)};
}

std::vector<CsvSchema> build() {
  std::vector<CsvSchema> s;

  CsvSchema branches{"branches.csv",
                     {text("program"), count("branch"), text("label"),
                      text("kind", {"IntInt", "IntZero", "RefNull", "RefRef", "StringEq"}),
                      text("classification", kClasses), count("designated_target"),
                      text("designated_outcome", {"then", "else"}), count("reached_runs"),
                      count("covered_runs"), count("total_runs"), rate("sr_rw", true),
                      rate("sr_mio", true), rate("sr_pooled"), text("group", kGroups),
                      text("exclusion", kExclusions)}};
  for (auto& c : measure_columns(true)) branches.columns.push_back(c);
  branches.columns.push_back(real("distinct_mean", true));
  branches.columns.push_back(count("walks"));
  s.push_back(std::move(branches));

  s.push_back({"targets.csv",
               {text("program"), count("target"), count("branch"),
                text("outcome", {"then", "else"}), count("reached_runs"), count("covered_runs"),
                count("total_runs"), rate("sr_rw", true), rate("sr_mio", true),
                text("exclusion", kExclusions)}});

  CsvSchema groups{"groups.csv", {text("group", {"Easy", "Hard", "Search", "RW", "Ungrouped", "All"}),
                                  count("nb")}};
  for (auto& c : measure_columns(true)) groups.columns.push_back(c);
  groups.columns.push_back(real("distinct_mean", true));
  s.push_back(std::move(groups));

  CsvSchema programs{"programs.csv",
                     {text("program"), count("branches"), count("reached_branches"),
                      count("never_covered_branches"), count("included_branches"),
                      count("targets"), count("reached_targets"),
                      count("never_covered_targets")}};
  for (auto& c : measure_columns(true)) programs.columns.push_back(c);
  s.push_back(std::move(programs));

  std::vector<std::string> class_rows = kClasses;
  class_rows.emplace_back("All");
  s.push_back({"branch_types.csv",
               {text("program"), text("classification", class_rows), count("nb"),
                count("never_covered"), rate("sr_rw", true), rate("sr_mio", true),
                rate("p_value", true), rate("a12", true), text("significant", {"yes", "no", "NA"})}});

  s.push_back({"comparison.csv",
               {text("program"), count("runs_rw"), count("runs_mio"), real("coverage_rw", true),
                real("coverage_mio", true), rate("a12", true), rate("p_value", true),
                text("significant", {"yes", "no", "NA"}), real("actions_rw", true),
                real("actions_mio", true)}});

  s.push_back({"correlations.csv",
               {text("success_rate", {"mio", "rw", "pooled"}),
                text("measure", {"ac", "nd", "nv", "ic", "pic", "dbi", "distinct"}), count("n"),
                corr("rho", true)}});
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view cell, double& v) {
  if (cell.empty()) return false;
  const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  return r.ec == std::errc{} && r.ptr == cell.data() + cell.size() && std::isfinite(v);
}

std::string check_cell(std::string_view cell, const Column& c) {
  if (c.nullable && cell == "NA") return {};
  switch (c.type) {
    case T::Text:
      if (!c.allowed.empty() &&
          std::find(c.allowed.begin(), c.allowed.end(), cell) == c.allowed.end()) {
        return "value '" + std::string(cell) + "' not allowed";
      }
      return {};
    case T::Count: {
      std::size_t n = 0;
      const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), n);
      if (cell.empty() || r.ec != std::errc{} || r.ptr != cell.data() + cell.size()) {
        return "expected a count, got '" + std::string(cell) + "'";
      }
      return {};
    }
    case T::Rate:
    case T::Real:
    case T::Correlation: {
      double v = 0.0;
      if (!parse_double(cell, v)) return "expected a number, got '" + std::string(cell) + "'";
      if (c.type == T::Rate && (v < 0.0 || v > 1.0)) return "value outside [0,1]";
      if (c.type == T::Correlation && (v < -1.0 || v > 1.0)) return "value outside [-1,1]";
      return {};
    }
  }
  return {};
}

std::vector<std::string_view> lines_of(std::string_view text, std::vector<std::string>& errors) {
  std::vector<std::string_view> lines;
  if (text.empty() || text.back() != '\n') {
    errors.emplace_back("file must end with a newline");
    if (text.empty()) return lines;
  } else {
    text.remove_suffix(1);
  }
  for (auto l : split(text, '\n')) lines.push_back(l);
  return lines;
}

}  // namespace

const std::vector<CsvSchema>& csv_schemas() {
  static const std::vector<CsvSchema> schemas = build();
  return schemas;
}

const CsvSchema& csv_schema(std::string_view file) {
  for (const auto& s : csv_schemas()) {
    if (s.file == file) return s;
  }
  throw InvalidParameter("no schema for " + std::string(file));
}

std::vector<std::string> validate_csv(std::string_view text, const CsvSchema& schema) {
  std::vector<std::string> errors;
  const auto lines = lines_of(text, errors);
  if (lines.empty()) {
    errors.emplace_back("missing header");
    return errors;
  }
  const auto header = split(lines[0], ',');
  bool header_ok = header.size() == schema.columns.size();
  for (std::size_t i = 0; header_ok && i < header.size(); ++i) {
    header_ok = header[i] == schema.columns[i].name;
  }
  if (!header_ok) {
    errors.push_back("line 1: header does not match " + schema.file);
    return errors;
  }
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto cells = split(lines[n], ',');
    const std::string where = "line " + std::to_string(n + 1) + ": ";
    if (cells.size() != schema.columns.size()) {
      errors.push_back(where + "expected " + std::to_string(schema.columns.size()) + " cells, got " +
                       std::to_string(cells.size()));
      continue;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (auto e = check_cell(cells[i], schema.columns[i]); !e.empty()) {
        errors.push_back(where + schema.columns[i].name + ": " + e);
      }
    }
  }
  return errors;
}

std::vector<std::string> validate_heatmap(std::string_view text, std::optional<std::size_t> rows,
                                          std::optional<std::size_t> columns) {
  std::vector<std::string> errors;
  const auto lines = lines_of(text, errors);
  if (rows && lines.size() != *rows) {
    errors.push_back("expected " + std::to_string(*rows) + " rows, got " +
                     std::to_string(lines.size()));
  }
  std::optional<std::size_t> width = columns;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto cells = split(lines[n], ' ');
    const std::string where = "line " + std::to_string(n + 1) + ": ";
    if (!width) width = cells.size();
    if (cells.size() != *width) {
      errors.push_back(where + "expected " + std::to_string(*width) + " columns");
      continue;
    }
    for (const auto cell : cells) {
      double v = 0.0;
      if (!parse_double(cell, v) || v < 0.0 || v > 1.0) {
        errors.push_back(where + "bad value '" + std::string(cell) + "'");
        break;
      }
    }
  }
  return errors;
}

std::vector<std::string> validate_metrics_json(std::string_view text) {
  std::vector<std::string> errors;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    errors.emplace_back(e.what());
    return errors;
  }
  if (!j.is_object()) {
    errors.emplace_back("expected an object");
    return errors;
  }
  static const char* const keys[] = {"ac", "nd", "nv", "ic", "pic", "dbi"};
  for (const char* k : keys) {
    if (!j.contains(k) || !j[k].is_number()) {
      errors.push_back(std::string("missing numeric field ") + k);
      continue;
    }
    const double v = j[k].get<double>();
    const double lo = std::string_view(k) == "ac" ? -1.0 : 0.0;
    if (!(v >= lo && v <= 1.0)) errors.push_back(std::string("field ") + k + " out of range");
  }
  if (j.size() != std::size(keys)) errors.emplace_back("unexpected fields");
  return errors;
}

std::vector<std::string> validate_manifest_json(std::string_view text) {
  std::vector<std::string> errors;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    errors.emplace_back(e.what());
    return errors;
  }
  const auto need = [&](const char* key, nlohmann::json::value_t type) {
    if (!j.contains(key) || j[key].type() != type) {
      errors.push_back(std::string("missing or mistyped field ") + key);
      return false;
    }
    return true;
  };
  using V = nlohmann::json::value_t;
  if (!j.is_object()) {
    errors.emplace_back("expected an object");
    return errors;
  }
  if (need("protocol", V::object)) {
    const auto& p = j["protocol"];
    for (const char* k : {"runs", "steps", "base_seed", "ac_lag"}) {
      if (!p.contains(k) || !p[k].is_number_unsigned()) {
        errors.push_back(std::string("protocol.") + k + " must be a non-negative integer");
      }
    }
    if (!p.contains("epsilon") || !p["epsilon"].is_number()) {
      errors.emplace_back("protocol.epsilon must be a number");
    }
    if (!p.contains("algorithms") || !p["algorithms"].is_array()) {
      errors.emplace_back("protocol.algorithms must be an array");
    }
    if (!p.contains("programs") || !p["programs"].is_array()) {
      errors.emplace_back("protocol.programs must be an array");
    }
  }
  need("designated_target", V::string);
  if (need("runs", V::array)) {
    for (const auto& r : j["runs"]) {
      if (!r.is_object() || !r.contains("program") || !r.contains("algorithm") ||
          !r.contains("run") || !r.contains("seed") || !r.contains("evaluations")) {
        errors.emplace_back("malformed run entry");
        break;
      }
    }
  }
  if (need("exclusions", V::array)) {
    for (const auto& e : j["exclusions"]) {
      if (!e.is_object() || !e.contains("program") || !e.contains("branch") ||
          !e.contains("reason")) {
        errors.emplace_back("malformed exclusion entry");
        break;
      }
    }
  }
  need("files", V::array);
  return errors;
}

}  // namespace fitscape::report
