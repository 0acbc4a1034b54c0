// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "glyphscape/math.hpp"
#include "glyphscape/mesh.hpp"

namespace glyphscape {

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend constexpr bool operator==(Rgb8, Rgb8) = default;
};

struct Rgba8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t a = 255;
  friend constexpr bool operator==(Rgba8, Rgba8) = default;
};

inline constexpr std::uint32_t kNoInstance = std::numeric_limits<std::uint32_t>::max();
inline constexpr Rgb8 kWhite{255, 255, 255};
/// Opaque near-white (0.97 per channel).
inline constexpr Rgba8 kBackground{247, 247, 247, 255};

/// Multiplies an 8-bit luminance by an albedo channel with rounding. Shared by
/// the direct rasterizer and the sprite compositor so both paths agree bitwise.
constexpr std::uint8_t modulate(std::uint8_t luminance, std::uint8_t albedo) {
  return static_cast<std::uint8_t>((static_cast<unsigned>(luminance) * albedo + 127u) / 255u);
}

/// Color, depth and instance-id targets. Depth is distance along the view
/// direction (smaller is nearer); background pixels hold +inf and kNoInstance.
class Framebuffer {
 public:
  Framebuffer() = default;
  Framebuffer(int width, int height, Rgba8 background = kBackground);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::vector<Rgba8> color;
  std::vector<float> depth;
  std::vector<std::uint32_t> id;

  /// Number of pixels owned by some instance.
  std::size_t covered_pixels() const;
  std::size_t pixels_with_id(std::uint32_t instance) const;

  /// Copies the rectangle [x0, x0+w) x [y0, y0+h) into a new framebuffer.
  Framebuffer crop(int x0, int y0, int w, int h) const;

  /// Bitwise comparison of all three targets (depth compared by bit pattern).
  bool bitwise_equal(const Framebuffer& other) const;

 private:
  int width_ = 0;
  int height_ = 0;
};

/// Orthographic camera looking down the view axis. World +x maps to pixel
/// +x and world +y to pixel -y (rows grow downwards).
struct OrthoCamera {
  Vec2 center{0.0, 0.0};
  double world_units_per_pixel = 1.0 / 64.0;
  int width = 256;
  int height = 256;

  /// Continuous pixel coordinates of a world point; pixel (i, j) has its
  /// center at (i + 0.5, j + 0.5).
  Vec2 to_pixel(Vec2 world) const;
  /// World position whose projection is the center of pixel (px, py).
  Vec2 pixel_center_to_world(double px, double py) const;
  void validate() const;
};

/// Directional light. `direction` is the direction light travels; a surface
/// with normal n receives ambient + diffuse * max(0, n . -direction).
struct Light {
  Vec3 direction = normalized(Vec3{1.0, -1.0, -1.0});
  double ambient = 0.25;
  double diffuse = 0.75;

  /// Key light from the upper left, in front of the glyphs.
  static Light standard() { return {}; }
  void validate() const;
  friend bool operator==(const Light&, const Light&) = default;
};

/// Luminance of a surface normal under `light`, quantized to 8 bits.
std::uint8_t shade(Vec3 normal, const Light& light);

struct RenderInstance {
  std::shared_ptr<const Mesh> mesh;
  /// World position. z points towards the viewer, so depth offset = -z.
  Vec3 position{0, 0, 0};
  Rgb8 albedo = kWhite;
  std::uint32_t id = 0;
};

struct RasterOptions {
  /// 0 selects default_worker_count().
  int workers = 0;
  Rgba8 background = kBackground;
};

/// Z-buffered rasterization of oriented meshes. Depth ties resolve to the
/// lower instance id, which makes the result independent of submission
/// order and of the worker count.
Framebuffer rasterize(std::span<const RenderInstance> instances, const OrthoCamera& camera,
                      const Light& light, const RasterOptions& options = {});

/// Pixels covered by `mesh` rendered alone at the world origin.
std::size_t silhouette_pixel_count(const Mesh& mesh, const OrthoCamera& camera, int workers = 0);

/// Instance id at (x, y), or kNoInstance for background.
std::uint32_t pick(const Framebuffer& fb, int x, int y);

namespace detail {

/// A mesh positioned on the pixel grid. Glyph-local coordinates are
/// `vertex / world_units_per_pixel + frac`, measured from the anchor pixel's
/// top-left corner. Everything derived from local coordinates is identical
/// wherever the anchor lands, which is what lets sprites replay exactly.
struct PlacedMesh {
  const Mesh* mesh = nullptr;
  int anchor_x = 0;
  int anchor_y = 0;
  double frac_x = 0.5;
  double frac_y = 0.5;
  float depth_offset = 0.0f;
  Rgb8 albedo = kWhite;
  std::uint32_t id = 0;
};

struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;  // exclusive
  int y1 = 0;  // exclusive
  bool empty() const { return x0 >= x1 || y0 >= y1; }
};

/// Sub-pixel precision used when snapping an instance onto the grid.
inline constexpr double kSubpixelSteps = 256.0;

/// Splits a continuous pixel coordinate into anchor pixel and snapped
/// fractional offset in [0, 1).
void snap_to_grid(double pixel, int& anchor, double& frac);

/// Conservative pixel rectangle touched by `placed` (unclipped).
PixelRect footprint(const PlacedMesh& placed, double world_units_per_pixel);

/// Draws `placed` into rows [row0, row1) of `fb`.
void draw_mesh_rows(Framebuffer& fb, const PlacedMesh& placed, double world_units_per_pixel,
                    const Light& light, int row0, int row1);

/// Row band height used for parallel decomposition.
inline constexpr int kBandRows = 32;

bool depth_wins(float depth, std::uint32_t id, float current_depth, std::uint32_t current_id);

}  // namespace detail

}  // namespace glyphscape
