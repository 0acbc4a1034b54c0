// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "glyphscape/binning.hpp"
#include "glyphscape/dataset.hpp"
#include "glyphscape/glyphs.hpp"
#include "glyphscape/raster.hpp"
#include "glyphscape/sprites.hpp"

namespace glyphscape {

/// A layout axis: a dataset column or a principal component.
struct AxisRef {
  std::string column;
  int pca_component = -1;

  bool is_pca() const { return pca_component >= 0; }
  std::string label() const;
  friend bool operator==(const AxisRef&, const AxisRef&) = default;
};

/// Bin edges as configured: explicit (manual) edges, or k even bins over the
/// data, optionally rebalanced.
struct BinSource {
  std::vector<double> edges;
  int k = 0;
  int rebalance = 0;

  bool manual() const { return !edges.empty(); }
  BinSpec resolve(std::span<const double> values) const;
  friend bool operator==(const BinSource&, const BinSource&) = default;
};

struct ShapeChannel {
  std::string column;
  BinSource bins;
  std::array<GlyphShape, kShapeCount> order;
};

struct HueChannel {
  /// Empty means unmapped (fixed color).
  std::string column;
  /// When set, hue encodes the within-bin position for this binned channel
  /// ("shape", "leftArms" or "rightArms") instead of a column's value.
  std::string within_bin;
  /// Optional fixed normalization range; defaults to the column's min/max.
  std::optional<std::array<double, 2>> range;
  Rgb8 fixed{128, 128, 128};

  bool mapped() const { return !column.empty() || !within_bin.empty(); }
};

struct ArmChannel {
  /// Empty means unmapped (0 arms).
  std::string column;
  BinSource bins;
};

struct DepthSplit {
  std::string column;
  double near_offset = -2.0;
  double far_offset = 2.0;
};

struct EdgeWidthChannel {
  BinSource bins;
};

struct PcaConfig {
  /// Empty means every dataset column.
  std::vector<std::string> columns;
  bool standardize = true;
};

struct ChannelMapping {
  AxisRef x;
  AxisRef y;
  ShapeChannel shape;
  HueChannel hue;
  ArmChannel left_arms;
  ArmChannel right_arms;
  std::optional<DepthSplit> depth_split;
  std::optional<EdgeWidthChannel> edge_width;
  PcaConfig pca;
  /// Pixels per world unit for glyphs.
  int footprint_px = 64;
  bool legend = true;
  double edge_alpha = 0.3;

  /// Throws ParameterError on structural problems or unknown columns.
  void validate(const Dataset& data) const;
  /// Highest referenced PCA component + 1 (0 when PCA is unused).
  int pca_components_needed() const;
};

inline constexpr std::array<GlyphShape, kShapeCount> kDefaultShapeOrder{
    GlyphShape::kSphere, GlyphShape::kCylinder,    GlyphShape::kCube,
    GlyphShape::kCone,   GlyphShape::kTetrahedron, GlyphShape::kTorus};

/// Parses a mapping document. Throws ParameterError with a message naming the
/// offending field.
ChannelMapping parse_mapping(const std::string& json_text);
ChannelMapping load_mapping(const std::string& path);
std::string mapping_to_json(const ChannelMapping& mapping);

/// Hue sweep from blue (t = 0) to red (t = 1); t is clamped to [0, 1].
Rgb8 colormap(double t);
Rgb8 hsv_to_rgb(double hue_deg, double saturation, double value);

}  // namespace glyphscape
