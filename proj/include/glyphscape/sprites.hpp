// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glyphscape/glyphs.hpp"
#include "glyphscape/raster.hpp"

namespace glyphscape {

/// Colorless pre-rendered glyph with per-pixel depth. Depth is relative to
/// the glyph's center plane and +inf outside the mask.
struct DepthSprite {
  GlyphSpec spec;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> luminance;
  std::vector<std::uint8_t> mask;
  std::vector<float> depth;
  /// Pixel holding the glyph center.
  int anchor_x = 0;
  int anchor_y = 0;

  std::size_t mask_count() const;
};

/// Light values as they are persisted (single precision).
struct LightFingerprint {
  float direction[3] = {0, 0, 0};
  float ambient = 0;
  float diffuse = 0;

  static LightFingerprint of(const Light& light);
  friend bool operator==(const LightFingerprint& a, const LightFingerprint& b);
};

class SpriteAtlas {
 public:
  int footprint_px = 0;
  int canvas_width = 0;
  int canvas_height = 0;
  LightFingerprint light;
  /// Indexed by GlyphSpec::key().
  std::vector<DepthSprite> sprites;

  const DepthSprite& sprite(const GlyphSpec& spec) const;
  /// World units per pixel of the camera the atlas was baked with.
  double world_units_per_pixel() const { return 1.0 / footprint_px; }
  bool bitwise_equal(const SpriteAtlas& other) const;
};

inline constexpr int kMinFootprint = 16;

/// Renders all 96 glyph permutations with white albedo; `footprint_px` is
/// the number of pixels per world unit (one unnormalized cube edge).
SpriteAtlas bake_atlas(int footprint_px, const Light& light,
                       const GlyphLibrary& library = GlyphLibrary::standard(), int workers = 0);

struct SpriteInstance {
  GlyphSpec spec;
  /// Pixel whose center the glyph center lands on.
  int pixel_x = 0;
  int pixel_y = 0;
  /// Added to sprite depth; smaller is nearer.
  float z_offset = 0.0f;
  Rgb8 albedo = kWhite;
  std::uint32_t id = 0;
};

struct CompositeStats {
  /// Sprite pixels visited (masked or not); bounded by N * canvas area.
  std::uint64_t sprite_pixels_visited = 0;
  std::uint64_t depth_tests = 0;
};

/// Z-tested blit of sprites. Same depth rule as rasterize(), so a
/// pixel-aligned scene matches direct rendering bit for bit.
Framebuffer composite(std::span<const SpriteInstance> instances, const SpriteAtlas& atlas, int width, int height,
                      int workers = 0, CompositeStats* stats = nullptr, Rgba8 background = kBackground);

/// Composites into an existing framebuffer (glyph layer over whatever is there).
void composite_into(Framebuffer& fb, std::span<const SpriteInstance> instances, const SpriteAtlas& atlas,
                    int workers = 0, CompositeStats* stats = nullptr);

void save_atlas(const SpriteAtlas& atlas, const std::string& path);
SpriteAtlas load_atlas(const std::string& path);

std::vector<std::uint8_t> serialize_atlas(const SpriteAtlas& atlas);
SpriteAtlas deserialize_atlas(std::span<const std::uint8_t> bytes);

}  // namespace glyphscape
