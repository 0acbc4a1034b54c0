// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace glyphscape {

/// Immutable table of numeric columns.
class Dataset {
 public:
  Dataset() = default;
  /// Validates equal column lengths and unique, non-empty names.
  Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns);

  const std::vector<std::string>& column_names() const { return names_; }
  std::size_t column_count() const { return names_.size(); }
  std::size_t row_count() const { return rows_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws ParameterError naming the column when absent.
  std::size_t index_of(std::string_view name) const;
  const std::vector<double>& column(std::size_t i) const { return columns_[i]; }
  const std::vector<double>& column(std::string_view name) const { return columns_[index_of(name)]; }
  double value(std::size_t row, std::size_t col) const { return columns_[col][row]; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::size_t rows_ = 0;
};

struct CsvLoad {
  Dataset data;
  /// Rows dropped for a missing or non-numeric cell.
  std::size_t dropped_rows = 0;
};

/// Header row plus comma-separated numeric rows.
CsvLoad parse_csv(std::string_view text);
CsvLoad load_csv(const std::string& path);

/// Strict numeric literal parse (integer/decimal/exponent). Rejects nan/inf.
std::optional<double> parse_number(std::string_view cell);

}  // namespace glyphscape
