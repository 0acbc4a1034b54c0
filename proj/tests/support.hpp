// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

// Shared helpers for the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "glyphscape/glyphs.hpp"
#include "glyphscape/raster.hpp"
#include "glyphscape/sprites.hpp"

namespace testing {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* env = std::getenv("GLYPHSCAPE_TMP");
  std::filesystem::path root = env ? env : std::filesystem::temp_directory_path() / "glyphscape-tests";
  auto dir = root / name;
  std::filesystem::create_directories(dir);
  return dir;
}

/// Eigen-decomposition of a symmetric 3x3 matrix from its characteristic
/// polynomial (trigonometric cubic roots) and null vectors by cross products.
/// Deliberately unrelated to the library's Jacobi solver.
struct Eigen3 {
  std::array<double, 3> values;                 // descending
  std::array<std::array<double, 3>, 3> vectors;  // unit, sign arbitrary
};

inline Eigen3 characteristic_eigen3(const std::array<std::array<double, 3>, 3>& a) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) + (a[2][2] - q) * (a[2][2] - q) +
                    2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  std::array<std::array<double, 3>, 3> b{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  }
  const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                      b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                      b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double pi = 3.14159265358979323846;
  Eigen3 out;
  out.values[0] = q + 2.0 * p * std::cos(phi);
  out.values[2] = q + 2.0 * p * std::cos(phi + 2.0 * pi / 3.0);
  out.values[1] = 3.0 * q - out.values[0] - out.values[2];
  for (int k = 0; k < 3; ++k) {
    std::array<std::array<double, 3>, 3> m = a;
    for (int i = 0; i < 3; ++i) m[i][i] -= out.values[k];
    // The eigenvector is orthogonal to every row of (A - lambda I); take the
    // largest cross product of two rows.
    std::array<double, 3> best{0, 0, 0};
    double best_n = -1.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const std::array<double, 3> c{m[i][1] * m[j][2] - m[i][2] * m[j][1], m[i][2] * m[j][0] - m[i][0] * m[j][2],
                                      m[i][0] * m[j][1] - m[i][1] * m[j][0]};
        const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
        if (n > best_n) {
          best_n = n;
          best = {c[0] / n, c[1] / n, c[2] / n};
        }
      }
    }
    out.vectors[k] = best;
  }
  return out;
}

/// Sample covariance of three columns after centering and (optionally)
/// dividing by each column's sample standard deviation.
inline std::array<std::array<double, 3>, 3> covariance3(const std::array<std::vector<double>, 3>& cols,
                                                        bool standardize) {
  const double n = static_cast<double>(cols[0].size());
  std::array<std::vector<double>, 3> z = cols;
  for (auto& c : z) {
    double mean = 0.0;
    for (double v : c) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double& v : c) {
      v -= mean;
      ss += v * v;
    }
    const double sd = standardize ? std::sqrt(ss / (n - 1.0)) : 1.0;
    for (double& v : c) v /= sd;
  }
  std::array<std::array<double, 3>, 3> cov{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < z[0].size(); ++r) s += z[i][r] * z[j][r];
      cov[i][j] = s / (n - 1.0);
    }
  }
  return cov;
}

/// Three correlated Gaussian columns with well separated variances.
inline std::array<std::vector<double>, 3> correlated_columns(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double mix[3][3];
  for (auto& row : mix) {
    for (double& m : row) m = u(rng);
  }
  const double scale[3] = {3.0, 1.5, 0.5};
  std::array<std::vector<double>, 3> cols;
  for (auto& c : cols) c.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double latent[3] = {scale[0] * g(rng), scale[1] * g(rng), scale[2] * g(rng)};
    for (int i = 0; i < 3; ++i) {
      cols[static_cast<std::size_t>(i)][r] = 10.0 * (i + 1) + latent[i] + mix[i][0] * latent[0] +
                                             mix[i][1] * latent[1] + mix[i][2] * latent[2];
    }
  }
  return cols;
}

/// Random pixel-aligned sprite scene with unique ids and distinct z offsets.
inline std::vector<glyphscape::SpriteInstance> random_sprite_scene(std::size_t n, int width, int height,
                                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<glyphscape::SpriteInstance> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = out[i];
    s.spec = glyphscape::GlyphSpec::from_key(static_cast<int>(rng() % glyphscape::kSpecCount));
    s.pixel_x = static_cast<int>(rng() % static_cast<std::uint64_t>(width + 40)) - 20;
    s.pixel_y = static_cast<int>(rng() % static_cast<std::uint64_t>(height + 40)) - 20;
    s.z_offset = static_cast<float>(i % 2 == 0 ? 0.5 * static_cast<double>(i) / n : -0.5 * static_cast<double>(i) / n);
    s.albedo = {static_cast<std::uint8_t>(rng() % 256), static_cast<std::uint8_t>(rng() % 256),
                static_cast<std::uint8_t>(rng() % 256)};
    s.id = static_cast<std::uint32_t>(i * 3 + 1);
  }
  return out;
}

/// Direct-path equivalent of a sprite scene rendered through `camera`.
inline std::vector<glyphscape::RenderInstance> to_render_instances(
    const std::vector<glyphscape::SpriteInstance>& sprites, const glyphscape::OrthoCamera& camera,
    const glyphscape::GlyphLibrary& lib = glyphscape::GlyphLibrary::standard()) {
  std::vector<glyphscape::RenderInstance> out;
  for (const auto& s : sprites) {
    const auto w = camera.pixel_center_to_world(s.pixel_x, s.pixel_y);
    out.push_back({lib.mesh(s.spec), {w.x, w.y, -static_cast<double>(s.z_offset)}, s.albedo, s.id});
  }
  return out;
}

}  // namespace testing
