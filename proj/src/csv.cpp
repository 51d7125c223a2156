// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#include "robed/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace robed {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("Table: row width mismatch");
  }
  rows.push_back(std::move(row));
}

std::string format_cell(const Table::Cell& cell) {
  if (std::holds_alternative<std::int64_t>(cell)) {
    return std::to_string(std::get<std::int64_t>(cell));
  }
  if (std::holds_alternative<double>(cell)) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(cell));
    return buf;
  }
  return std::get<std::string>(cell);
}

std::string to_csv_string(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const Table& table, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::runtime_error("write_csv: cannot open " + path);
  }
  file << to_csv_string(table);
  if (!file) {
    throw std::runtime_error("write_csv: write failed for " + path);
  }
}

}  // namespace robed
