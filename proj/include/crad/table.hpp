#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace crad {

using Cell = std::variant<double, std::int64_t, std::string>;

enum class TableFormat { csv, json };

TableFormat parse_format(const std::string& text);

/// Homogeneous typed rows plus run metadata (seed, version, config hash).
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::map<std::string, std::string> metadata;

  void add_row(std::vector<Cell> row);  // checks the column count
};

std::string format_cell(const Cell& cell, int precision);

/// CSV: '# key = value' metadata comments, header row, data rows.
/// JSON: {"metadata": ..., "columns": ..., "rows": ...}.
void write_table(const ResultTable& table, std::ostream& out, TableFormat format,
                 int precision);

std::string table_to_string(const ResultTable& table, TableFormat format, int precision);

/// Throws IoError on failure.
void write_table_file(const ResultTable& table, const std::string& path, TableFormat format,
                      int precision);

}  // namespace crad
