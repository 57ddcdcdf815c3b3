// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace zlab {

// Tabular reports with a stable column order. Floats print at fixed
// precision 6; CSV quoting follows RFC 4180. Rows must be homogeneous: the
// first row fixes each column's type and later rows must match it.
class Table {
 public:
  using Cell = std::variant<std::int64_t, double, std::string>;

  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("Table: need at least one column");
  }

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t row_count() const { return rows_.size(); }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size())
      throw std::invalid_argument("Table: row width does not match the columns");
    if (rows_.empty()) {
      for (const Cell& c : row) types_.push_back(c.index());
    } else {
      for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i].index() != types_[i])
          throw std::invalid_argument("Table: mixed cell types in column " + columns_[i]);
    }
    rows_.push_back(std::move(row));
  }

  static std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
  }

  static std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
    return out;
  }

  void write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      os << (i ? "," : "") << csv_quote(columns_[i]);
    os << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        os << csv_quote(cell_text(row[i]));
      }
      os << '\n';
    }
  }

  void write_text(std::ostream& os) const {
    write_csv(os);  // the CSV form is already the most readable fixed layout
  }

  static std::string cell_text(const Cell& c) {
    if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    return std::get<std::string>(c);
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::size_t> types_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace zlab
