// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace glyphscape {

/// Ordered bin edges. Bins are [e_i, e_i+1) except the last, which is closed.
/// A spec with two equal edges is the degenerate single bin produced by
/// even_bins() on constant data.
class BinSpec {
 public:
  BinSpec() = default;
  /// Throws ParameterError unless edges are strictly increasing (length >= 2)
  /// or the degenerate pair {m, m}.
  explicit BinSpec(std::vector<double> edges);

  const std::vector<double>& edges() const { return edges_; }
  int k() const { return static_cast<int>(edges_.size()) - 1; }
  double lower() const { return edges_.front(); }
  double upper() const { return edges_.back(); }
  bool degenerate() const { return edges_.size() == 2 && edges_[0] == edges_[1]; }

  bool contains(double x) const { return x >= lower() && x <= upper(); }
  /// Bin index of x; throws DomainError (row 0) when x is outside the domain.
  int bin_of(double x) const;
  /// Same, but the error names `row`.
  int bin_of(double x, std::size_t row) const;

  friend bool operator==(const BinSpec&, const BinSpec&) = default;

 private:
  std::vector<double> edges_{0.0, 1.0};
};

/// k equal-width bins over [min, max].
BinSpec even_bins(std::span<const double> values, int k);

/// Iteratively splits the fullest bin at its median and merges the adjacent
/// pair with the smallest combined count, keeping k. Stops early once an
/// iteration would not strictly lower the maximum count.
BinSpec rebalance_bins(std::span<const double> values, const BinSpec& spec, int iterations);

/// Slider back-end: the edges verbatim, validated.
BinSpec set_manual_edges(std::vector<double> edges);

/// Members per bin. Throws DomainError naming the first row outside the domain.
std::vector<std::size_t> bin_counts(std::span<const double> values, const BinSpec& spec);

/// Normalized rank of each value within its own bin, in [0, 1].
std::vector<double> within_bin_position(std::span<const double> values, const BinSpec& spec);

}  // namespace glyphscape
