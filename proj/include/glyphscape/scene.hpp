// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glyphscape/binning.hpp"
#include "glyphscape/dataset.hpp"
#include "glyphscape/mapping.hpp"
#include "glyphscape/pca.hpp"
#include "glyphscape/raster.hpp"
#include "glyphscape/sprites.hpp"

namespace glyphscape {

struct GlyphInstance {
  std::size_t record_index = 0;
  GlyphSpec spec;
  int shape_bin = 0;
  /// Layout coordinates (x, y channel values).
  Vec2 position;
  /// Added to depth; negative is nearer.
  double z_offset = 0.0;
  Rgb8 hue{128, 128, 128};
};

struct LegendChannel {
  std::string channel;
  std::string column;
  std::vector<double> edges;
};

struct Legend {
  std::string x_label;
  std::string y_label;
  std::vector<GlyphShape> shapes;  // one per shape bin
  bool hue_mapped = false;
  std::string hue_source;
  std::array<double, 2> hue_range{0.0, 1.0};
  Rgb8 fixed_hue{128, 128, 128};
  bool left_arms = false;
  bool right_arms = false;
  std::vector<LegendChannel> bins;
  std::optional<DepthSplit> depth_split;

  std::string to_json() const;
};

struct BoundScene {
  std::vector<GlyphInstance> instances;
  Legend legend;
  /// Resolved bin specs by channel name ("shape", "leftArms", "rightArms").
  std::map<std::string, BinSpec> bins;
  std::optional<PcaResult> pca;
};

/// PCA the mapping's axes need (columns and standardization from the mapping).
PcaResult mapping_pca(const Dataset& data, const ChannelMapping& mapping);

/// One instance per row. `pca_cache` is reused when given and PCA is needed.
/// Throws BindError for values outside manual bin edges.
BoundScene bind(const Dataset& data, const ChannelMapping& mapping, const PcaResult* pca_cache = nullptr);

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  int width_px = 1;
};

struct EdgeSet {
  std::vector<Edge> edges;
  double alpha = 0.3;

  void validate(std::size_t instance_count) const;
};

struct RawEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  std::optional<double> length;
};

/// Two or three numeric columns: source index, target index, optional length.
/// A non-numeric first line is taken as a header.
std::vector<RawEdge> parse_edges_csv(std::string_view text);
std::vector<RawEdge> load_edges_csv(const std::string& path);

/// Widths from the mapping's edgeWidth bins over the lengths (1 px when
/// unmapped or lengthless).
EdgeSet bind_edges(const std::vector<RawEdge>& raw, const ChannelMapping& mapping, std::size_t instance_count);

struct LensParams {
  Vec2 focus{0.0, 0.0};
  double radius_px = 100.0;
  /// 0 turns the lens off.
  double magnification = 0.0;

  void validate() const;
  bool active() const { return magnification > 0.0; }
};

/// Bounded fisheye: u' = (d + 1) u / (d u + 1) inside the disk, identity outside.
Vec2 lens_transform(Vec2 p, const LensParams& lens);

enum class RenderPath { kDirect, kSprite };

struct PlotFrame {
  int width = 1024;
  int height = 1024;
  int footprint_px = 64;
  bool legend = true;
  int workers = 0;
};

/// Maps layout coordinates into the plot area (inset by one footprint,
/// leaving room for the legend strip).
struct PlotLayout {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;  // plot area, continuous pixels
  Vec2 data_min;
  Vec2 data_max;
  int legend_x0 = 0;  // first legend column (== width when no legend)

  Vec2 to_pixel(Vec2 data) const;
};

PlotLayout make_layout(const std::vector<GlyphInstance>& instances, const PlotFrame& frame);

/// Pixel whose center each glyph center lands on, after the lens.
std::vector<std::array<int, 2>> glyph_pixels(const std::vector<GlyphInstance>& instances, const PlotLayout& layout,
                                             const LensParams& lens);

inline constexpr Rgb8 kEdgeColor{60, 60, 60};

/// Edges beneath glyphs, then glyphs (direct or sprite path) with depth
/// testing among glyphs only, then the legend strip. Instance ids in the
/// id buffer are indices into `instances`.
Framebuffer render_plot(const std::vector<GlyphInstance>& instances, const EdgeSet& edges, const PlotFrame& frame,
                        const Light& light, const LensParams& lens, RenderPath path,
                        const SpriteAtlas* atlas = nullptr, const Legend* legend = nullptr);

struct RecordView {
  std::size_t record_index = 0;
  std::vector<std::pair<std::string, double>> values;
  GlyphInstance glyph;

  std::string to_json() const;
};

std::optional<RecordView> probe(const Framebuffer& fb, int x, int y, const std::vector<GlyphInstance>& instances,
                                const Dataset& data);

}  // namespace glyphscape
