// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "glyphscape/glyphs.hpp"
#include "glyphscape/raster.hpp"

namespace glyphscape {

/// A test glyph flanked left and right by two occluders whose bounding boxes
/// overlap it by `overlap` of its width.
struct OcclusionConfig {
  double overlap = 0.95;
  int render_size = 512;
  /// Optional list of overlaps for sweep runs.
  std::vector<double> sweep;
  int workers = 0;

  void validate() const;
};

struct OcclusionResult {
  /// matrix[test][occluder], visible fraction in [0, 1].
  std::array<std::array<double, kShapeCount>, kShapeCount> matrix{};
  std::array<std::size_t, kShapeCount> unoccluded_counts{};
  OcclusionConfig config;

  double diagonal_mean() const;
  double off_diagonal_mean() const;
};

/// Instance ids used in every occlusion scene.
inline constexpr std::uint32_t kLeftOccluderId = 0;
inline constexpr std::uint32_t kRightOccluderId = 1;
/// Highest id, so exact depth ties count as occluded.
inline constexpr std::uint32_t kTestGlyphId = 2;

/// Square camera spanning four world units.
OrthoCamera occlusion_camera(int render_size);

/// The three instances of one cell at the given overlap.
std::array<RenderInstance, 3> occlusion_scene(GlyphShape test, GlyphShape occluder, double overlap,
                                              const GlyphLibrary& library = GlyphLibrary::standard());

Framebuffer render_occlusion_cell(GlyphShape test, GlyphShape occluder, const OcclusionConfig& config,
                                  const GlyphLibrary& library = GlyphLibrary::standard());

/// Visible pixels of the test glyph over its unoccluded silhouette.
double run_cell(GlyphShape test, GlyphShape occluder, const OcclusionConfig& config,
                const GlyphLibrary& library = GlyphLibrary::standard());

OcclusionResult run_matrix(const OcclusionConfig& config,
                           const GlyphLibrary& library = GlyphLibrary::standard());

/// One matrix per entry of config.sweep (or just config.overlap when empty).
std::vector<OcclusionResult> run_sweep(const OcclusionConfig& config,
                                       const GlyphLibrary& library = GlyphLibrary::standard());

/// 6x6 grid of cell renders, rows = test shape, columns = occluder.
Framebuffer contact_sheet(const OcclusionConfig& config,
                          const GlyphLibrary& library = GlyphLibrary::standard());

/// Header `overlap,test,<occluder names>`, then six rows per result with
/// visible percentages to one decimal.
void write_occlusion_csv(std::ostream& out, std::span<const OcclusionResult> results);
void write_occlusion_csv(std::ostream& out, const OcclusionResult& result);

}  // namespace glyphscape
