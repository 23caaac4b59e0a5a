#pragma once

// Published layouts of the report files and validators for them.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fitscape::report {

enum class ColumnType : std::uint8_t {
  Text,        // any value without a comma
  Count,       // non-negative integer
  Rate,        // real in [0,1]
  Real,        // finite real
  Correlation  // real in [-1,1]
};

struct Column {
  std::string name;
  ColumnType type = ColumnType::Text;
  bool nullable = false;                // "NA" allowed
  std::vector<std::string> allowed;     // Text only; empty = unrestricted
};

struct CsvSchema {
  std::string file;
  std::vector<Column> columns;
};

[[nodiscard]] const std::vector<CsvSchema>& csv_schemas();
// Schema by file name ("branches.csv", ...). Throws InvalidParameter.
[[nodiscard]] const CsvSchema& csv_schema(std::string_view file);

// Problems found in `text`, each prefixed with its line number. Empty when
// the text conforms.
[[nodiscard]] std::vector<std::string> validate_csv(std::string_view text, const CsvSchema& schema);

// Heatmap matrix: `rows` lines of `columns` space-separated values in [0,1].
[[nodiscard]] std::vector<std::string> validate_heatmap(std::string_view text,
                                                        std::optional<std::size_t> rows = {},
                                                        std::optional<std::size_t> columns = {});

// Object with exactly the numeric keys ac, nd, nv, ic, pic, dbi in range.
[[nodiscard]] std::vector<std::string> validate_metrics_json(std::string_view text);

[[nodiscard]] std::vector<std::string> validate_manifest_json(std::string_view text);

}  // namespace fitscape::report
