#include "crad/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crad/errors.hpp"

namespace crad {

TableFormat parse_format(const std::string& text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "json") return TableFormat::json;
  throw ConfigError("unknown output format '" + text + "' (csv | json)");
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw Error("row width " + std::to_string(row.size()) + " does not match " +
                std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::string format_cell(const Cell& cell, int precision) {
  if (const auto* d = std::get_if<double>(&cell)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, *d);
    return buf;
  }
  if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    return std::to_string(*i);
  }
  return std::get<std::string>(cell);
}

void write_table(const ResultTable& table, std::ostream& out, TableFormat format,
                 int precision) {
  if (format == TableFormat::csv) {
    for (const auto& [key, value] : table.metadata) {
      out << "# " << key << " = " << value << "\n";
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out << ",";
      out << table.columns[c];
    }
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ",";
        out << format_cell(row[c], precision);
      }
      out << "\n";
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["metadata"] = table.metadata;
  doc["columns"] = table.columns;
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      // numbers serialized as strings at the configured precision keep the
      // round-trip stable across json implementations
      jrow.push_back(format_cell(cell, precision));
    }
    rows.push_back(std::move(jrow));
  }
  out << doc.dump(2) << "\n";
}

std::string table_to_string(const ResultTable& table, TableFormat format, int precision) {
  std::ostringstream out;
  write_table(table, out, format, precision);
  return out.str();
}

void write_table_file(const ResultTable& table, const std::string& path, TableFormat format,
                      int precision) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  write_table(table, out, format, precision);
  out.flush();
  if (!out) throw IoError("failed writing output file: " + path);
}

}  // namespace crad
