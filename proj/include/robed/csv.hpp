// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace robed {

/// Column-ordered record table; the unit every experiment emits.
struct Table {
  using Cell = std::variant<std::int64_t, double, std::string>;

  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Doubles serialized with 17 significant digits, so identical tables give
/// byte-identical files and parsing recovers values exactly.
std::string format_cell(const Table::Cell& cell);
std::string to_csv_string(const Table& table);
void write_csv(const Table& table, const std::string& path);

}  // namespace robed
