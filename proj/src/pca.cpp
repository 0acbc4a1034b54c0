// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glyphscape/error.hpp"

namespace glyphscape {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i != j) s += a[i][j] * a[i][j];
    }
  }
  return std::sqrt(s);
}

double frobenius(const Matrix& a) {
  double s = 0.0;
  for (const auto& row : a) {
    for (double v : row) s += v * v;
  }
  return std::sqrt(s);
}

std::vector<std::size_t> resolve_columns(const Dataset& data, const std::vector<std::string>& columns) {
  if (columns.empty()) throw ParameterError("at least one column is required");
  std::vector<std::size_t> idx;
  for (const auto& c : columns) {
    const auto i = data.index_of(c);
    if (std::find(idx.begin(), idx.end(), i) != idx.end()) throw ParameterError("column '" + c + "' listed twice");
    idx.push_back(i);
  }
  return idx;
}

double column_mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

EigenResult jacobi_eigen(const Matrix& symmetric) {
  const std::size_t n = symmetric.size();
  for (const auto& row : symmetric) {
    if (row.size() != n) throw ParameterError("matrix must be square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(symmetric[i][j])) throw ParameterError("matrix entries must be finite");
      if (symmetric[i][j] != symmetric[j][i]) throw ParameterError("matrix must be symmetric");
    }
  }
  Matrix a = symmetric;
  Matrix v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  EigenResult out;
  const double threshold = kJacobiTolerance * std::max(1.0, frobenius(a));
  constexpr int kMaxSweeps = 100;
  while (off_diagonal_norm(a) >= threshold && out.sweeps < kMaxSweeps) {
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        a[p][q] = a[q][p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  for (std::size_t i : order) {
    out.values.push_back(a[i][i]);
    std::vector<double> vec(n);
    for (std::size_t k = 0; k < n; ++k) vec[k] = v[k][i];
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

std::vector<double> PcaResult::score_column(std::size_t component) const {
  std::vector<double> out(scores.size());
  for (std::size_t r = 0; r < scores.size(); ++r) out[r] = scores[r][component];
  return out;
}

PcaResult pca(const Dataset& data, const std::vector<std::string>& columns, int n_components, bool standardize) {
  const auto idx = resolve_columns(data, columns);
  const std::size_t m = idx.size();
  if (m > kMaxPcaColumns) throw ParameterError("pca supports at most " + std::to_string(kMaxPcaColumns) + " columns");
  if (n_components < 1 || static_cast<std::size_t>(n_components) > m) {
    throw ParameterError("component count must be between 1 and the number of columns");
  }
  const std::size_t n = data.row_count();
  if (n < 2) throw ParameterError("pca needs at least two rows");

  PcaResult out;
  out.columns = columns;
  Matrix z(m);
  for (std::size_t c = 0; c < m; ++c) {
    const auto& col = data.column(idx[c]);
    const double mean = column_mean(col);
    double scale = 1.0;
    if (standardize) {
      scale = sample_sd(col, mean);
      if (!(scale > 0.0)) throw ParameterError("column '" + columns[c] + "' has zero variance");
    }
    out.mean.push_back(mean);
    out.scales.push_back(scale);
    z[c].resize(n);
    for (std::size_t r = 0; r < n; ++r) z[c][r] = (col[r] - mean) / scale;
  }

  Matrix cov(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += z[i][r] * z[j][r];
      cov[i][j] = cov[j][i] = s / static_cast<double>(n - 1);
    }
  }

  auto eig = jacobi_eigen(cov);
  for (int k = 0; k < n_components; ++k) {
    auto vec = eig.vectors[static_cast<std::size_t>(k)];
    std::size_t big = 0;
    for (std::size_t c = 1; c < m; ++c) {
      if (std::abs(vec[c]) > std::abs(vec[big])) big = c;
    }
    if (vec[big] < 0) {
      for (double& x : vec) x = -x;
    }
    out.components.push_back(std::move(vec));
    out.eigenvalues.push_back(std::max(0.0, eig.values[static_cast<std::size_t>(k)]));
  }

  out.scores.assign(n, std::vector<double>(out.components.size(), 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < out.components.size(); ++k) {
      double s = 0.0;
      for (std::size_t c = 0; c < m; ++c) s += z[c][r] * out.components[k][c];
      out.scores[r][k] = s;
    }
  }
  return out;
}

Matrix correlation_matrix(const Dataset& data, const std::vector<std::string>& columns) {
  const auto idx = resolve_columns(data, columns);
  const std::size_t m = idx.size();
  const std::size_t n = data.row_count();
  if (n < 2) throw ParameterError("correlation needs at least two rows");
  Matrix z(m);
  for (std::size_t c = 0; c < m; ++c) {
    const auto& col = data.column(idx[c]);
    const double mean = column_mean(col);
    double ss = 0.0;
    for (double x : col) ss += (x - mean) * (x - mean);
    if (!(ss > 0.0)) throw ParameterError("column '" + columns[c] + "' has zero variance");
    const double norm = std::sqrt(ss);
    z[c].resize(n);
    for (std::size_t r = 0; r < n; ++r) z[c][r] = (col[r] - mean) / norm;
  }
  Matrix out(m, std::vector<double>(m, 1.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += z[i][r] * z[j][r];
      out[i][j] = out[j][i] = std::clamp(s, -1.0, 1.0);
    }
  }
  return out;
}

std::vector<double> outlier_distances(const PcaResult& result) {
  constexpr double kMinEigenvalue = 1e-12;
  const bool all_flat = std::all_of(result.eigenvalues.begin(), result.eigenvalues.end(),
                                    [](double l) { return l <= kMinEigenvalue; });
  std::vector<double> d(result.row_count(), 0.0);
  if (all_flat) return d;
  for (std::size_t k = 0; k < result.eigenvalues.size(); ++k) {
    if (result.eigenvalues[k] <= kMinEigenvalue) {
      throw ParameterError("component " + std::to_string(k) + " has a degenerate eigenvalue");
    }
  }
  for (std::size_t r = 0; r < d.size(); ++r) {
    double s = 0.0;
    for (std::size_t k = 0; k < result.eigenvalues.size(); ++k) {
      s += result.scores[r][k] * result.scores[r][k] / result.eigenvalues[k];
    }
    d[r] = std::sqrt(s);
  }
  return d;
}

std::vector<double> descending_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t t = 0;
  while (t < order.size()) {
    std::size_t u = t;
    while (u < order.size() && values[order[u]] == values[order[t]]) ++u;
    const double rank = 0.5 * (static_cast<double>(t + 1) + static_cast<double>(u));
    for (std::size_t q = t; q < u; ++q) ranks[order[q]] = rank;
    t = u;
  }
  return ranks;
}

std::vector<double> outlier_rank(const PcaResult& result) {
  const auto d = outlier_distances(result);
  return descending_ranks(d);
}

}  // namespace glyphscape
