// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "glyphscape/dataset.hpp"

namespace glyphscape {

/// Dense square matrix, row-major rows.
using Matrix = std::vector<std::vector<double>>;

struct EigenResult {
  /// Descending.
  std::vector<double> values;
  /// vectors[i] is the unit eigenvector for values[i].
  std::vector<std::vector<double>> vectors;
  int sweeps = 0;
};

inline constexpr double kJacobiTolerance = 1e-12;

/// Cyclic Jacobi diagonalization of a symmetric matrix. Iterates until the
/// off-diagonal Frobenius norm falls below kJacobiTolerance (relative to the
/// matrix norm when that exceeds 1).
EigenResult jacobi_eigen(const Matrix& symmetric);

struct PcaResult {
  std::vector<std::string> columns;
  std::vector<double> mean;
  /// Per-column divisor used (sample standard deviation, or 1).
  std::vector<double> scales;
  /// Orthonormal, sorted by descending eigenvalue. Each component's
  /// largest-magnitude entry is positive.
  std::vector<std::vector<double>> components;
  std::vector<double> eigenvalues;
  /// scores[row][component]
  std::vector<std::vector<double>> scores;

  std::size_t component_count() const { return components.size(); }
  std::size_t row_count() const { return scores.size(); }
  /// Scores column for one component.
  std::vector<double> score_column(std::size_t component) const;
};

/// Principal components of the named columns via the sample covariance.
PcaResult pca(const Dataset& data, const std::vector<std::string>& columns, int n_components,
              bool standardize = true);

inline constexpr std::size_t kMaxPcaColumns = 12;

/// Pearson correlation of the named columns.
Matrix correlation_matrix(const Dataset& data, const std::vector<std::string>& columns);

/// Mahalanobis distance of every row in the retained PCA space.
std::vector<double> outlier_distances(const PcaResult& result);

/// Rank 1 = most outlying; ties share their mean rank.
std::vector<double> outlier_rank(const PcaResult& result);

/// Descending-order ranks of `values` with mean-rank ties.
std::vector<double> descending_ranks(std::span<const double> values);

}  // namespace glyphscape
