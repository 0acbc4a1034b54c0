// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "glyphscape/error.hpp"

namespace glyphscape {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Dataset::Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {
  if (names_.size() != columns_.size()) throw ParameterError("column name count does not match column count");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ParameterError("column names must be non-empty");
    if (!seen.insert(n).second) throw ParameterError("duplicate column name '" + n + "'");
  }
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].size() != rows_) throw ParameterError("column '" + names_[i] + "' has a different length");
  }
}

std::optional<std::size_t> Dataset::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Dataset::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw ParameterError("unknown column '" + std::string(name) + "'");
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v, std::chars_format::general);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
  // from_chars accepts "nan"/"inf" spellings; isfinite rejects them above.
  return v;
}

CsvLoad parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!trim(line).empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  if (lines.empty()) throw IngestionError(IngestionError::Kind::kEmptyFile, "CSV input is empty");

  const auto header = split_commas(lines.front());
  bool header_ok = !header.empty();
  for (auto h : header) {
    // A header needs names; a numeric first row means it is missing.
    if (h.empty() || parse_number(h)) header_ok = false;
  }
  if (!header_ok) throw IngestionError(IngestionError::Kind::kNoHeader, "CSV has no header row of column names");

  std::vector<std::string> names(header.begin(), header.end());
  std::vector<std::vector<double>> columns(names.size());
  CsvLoad out;
  std::vector<double> row(names.size());
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto cells = split_commas(lines[li]);
    bool ok = cells.size() == names.size();
    for (std::size_t c = 0; ok && c < cells.size(); ++c) {
      if (auto v = parse_number(cells[c])) {
        row[c] = *v;
      } else {
        ok = false;
      }
    }
    if (!ok) {
      ++out.dropped_rows;
      continue;
    }
    for (std::size_t c = 0; c < names.size(); ++c) columns[c].push_back(row[c]);
  }
  if (columns.front().empty()) {
    throw IngestionError(IngestionError::Kind::kZeroRows,
                         "CSV has no usable rows (" + std::to_string(out.dropped_rows) + " dropped)");
  }
  try {
    out.data = Dataset(std::move(names), std::move(columns));
  } catch (const ParameterError& e) {
    throw IngestionError(IngestionError::Kind::kNoHeader, e.what());
  }
  return out;
}

CsvLoad load_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IngestionError(IngestionError::Kind::kUnreadable, "cannot open CSV " + path);
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_csv(text);
}

}  // namespace glyphscape
