// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/binning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "glyphscape/error.hpp"

namespace glyphscape {

namespace {

std::string format_value(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

void check_edges(const std::vector<double>& edges) {
  if (edges.size() < 2) throw ParameterError("bin edges need at least two values");
  for (double e : edges) {
    if (!std::isfinite(e)) throw ParameterError("bin edges must be finite");
  }
  if (edges.size() == 2 && edges[0] == edges[1]) return;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw ParameterError("bin edges must be strictly increasing (edge " + std::to_string(i) + " is " +
                           format_value(edges[i]) + " after " + format_value(edges[i - 1]) + ")");
    }
  }
}

std::size_t max_count(const std::vector<std::size_t>& counts) {
  return *std::max_element(counts.begin(), counts.end());
}

}  // namespace

BinSpec::BinSpec(std::vector<double> edges) : edges_(std::move(edges)) { check_edges(edges_); }

int BinSpec::bin_of(double x) const { return bin_of(x, 0); }

int BinSpec::bin_of(double x, std::size_t row) const {
  if (!contains(x)) {
    throw DomainError("value " + format_value(x) + " at row " + std::to_string(row) + " is outside [" +
                          format_value(lower()) + ", " + format_value(upper()) + "]",
                      row);
  }
  if (x == upper()) return k() - 1;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  return static_cast<int>(it - edges_.begin()) - 1;
}

BinSpec even_bins(std::span<const double> values, int k) {
  if (values.empty()) throw ParameterError("even_bins needs at least one value");
  if (k < 1) throw ParameterError("bin count must be at least 1");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ParameterError("even_bins needs finite values");
  if (lo == hi) return BinSpec({lo, hi});
  std::vector<double> edges(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) edges[static_cast<std::size_t>(i)] = lo + i * (hi - lo) / k;
  edges.back() = hi;
  // Very narrow ranges can collapse neighbouring edges in floating point.
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw ParameterError("value range too narrow for " + std::to_string(k) + " bins");
  }
  return BinSpec(std::move(edges));
}

BinSpec set_manual_edges(std::vector<double> edges) {
  if (edges.size() == 2 && edges[0] == edges[1]) throw ParameterError("bin edges must be strictly increasing");
  return BinSpec(std::move(edges));
}

std::vector<std::size_t> bin_counts(std::span<const double> values, const BinSpec& spec) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(spec.k()), 0);
  for (std::size_t i = 0; i < values.size(); ++i) ++counts[static_cast<std::size_t>(spec.bin_of(values[i], i))];
  return counts;
}

BinSpec rebalance_bins(std::span<const double> values, const BinSpec& spec, int iterations) {
  if (iterations < 0) throw ParameterError("iterations must be non-negative");
  if (spec.degenerate() || values.empty()) return spec;
  BinSpec current = spec;
  auto counts = bin_counts(values, current);
  for (int it = 0; it < iterations; ++it) {
    const auto fullest = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    std::vector<double> members;
    for (double v : values) {
      if (current.bin_of(v) == static_cast<int>(fullest)) members.push_back(v);
    }
    std::sort(members.begin(), members.end());
    const std::size_t n = members.size();
    const double median = n % 2 == 1 ? members[n / 2] : 0.5 * (members[n / 2 - 1] + members[n / 2]);
    const auto& e = current.edges();
    if (!(median > e[fullest] && median < e[fullest + 1])) break;

    std::vector<double> split(e.begin(), e.end());
    split.insert(split.begin() + static_cast<std::ptrdiff_t>(fullest) + 1, median);
    const BinSpec wide(split);
    const auto wide_counts = bin_counts(values, wide);

    std::size_t merge_at = 0;
    std::size_t best = wide_counts[0] + wide_counts[1];
    for (std::size_t j = 1; j + 1 < wide_counts.size(); ++j) {
      const std::size_t c = wide_counts[j] + wide_counts[j + 1];
      if (c < best) {
        best = c;
        merge_at = j;
      }
    }
    split.erase(split.begin() + static_cast<std::ptrdiff_t>(merge_at) + 1);
    BinSpec next(std::move(split));
    auto next_counts = bin_counts(values, next);
    if (max_count(next_counts) >= max_count(counts)) break;
    current = std::move(next);
    counts = std::move(next_counts);
  }
  return current;
}

std::vector<double> within_bin_position(std::span<const double> values, const BinSpec& spec) {
  std::vector<int> bin(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) bin[i] = spec.bin_of(values[i], i);
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (bin[a] != bin[b]) return bin[a] < bin[b];
    return values[a] < values[b];
  });

  std::vector<double> out(values.size(), 0.5);
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start;
    while (end < order.size() && bin[order[end]] == bin[order[start]]) ++end;
    const std::size_t count = end - start;
    if (count > 1) {
      std::size_t t = start;
      while (t < end) {
        std::size_t u = t;
        while (u < end && values[order[u]] == values[order[t]]) ++u;
        // 1-based ranks t-start+1 .. u-start share their mean.
        const double rank = 0.5 * (static_cast<double>(t - start + 1) + static_cast<double>(u - start));
        for (std::size_t q = t; q < u; ++q) out[order[q]] = (rank - 1.0) / static_cast<double>(count - 1);
        t = u;
      }
    }
    start = end;
  }
  return out;
}

}  // namespace glyphscape
