// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/sprites.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "glyphscape/error.hpp"
#include "glyphscape/parallel.hpp"

namespace glyphscape {

namespace {

constexpr char kMagic[4] = {'G', 'S', 'P', 'R'};
constexpr std::uint32_t kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little, "atlas I/O assumes a little-endian host");

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { bytes(&v, 2); }
  void u32(std::uint32_t v) { bytes(&v, 4); }
  void f32(float v) { bytes(&v, 4); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  void bytes(void* p, std::size_t n) {
    if (pos_ + n > in_.size()) {
      throw TruncationError("atlas truncated at byte " + std::to_string(in_.size()) + " (needed " +
                            std::to_string(pos_ + n) + ")");
    }
    std::memcpy(p, in_.data() + pos_, n);
    pos_ += n;
  }
  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }
  std::uint16_t u16() {
    std::uint16_t v;
    bytes(&v, 2);
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, 4);
    return v;
  }
  float f32() {
    float v;
    bytes(&v, 4);
    return v;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

// Horizontal run of masked pixels in sprite coordinates.
struct Span {
  int y;
  int x0;
  int x1;
};

std::vector<Span> masked_spans(const DepthSprite& s) {
  std::vector<Span> spans;
  for (int y = 0; y < s.height; ++y) {
    int x = 0;
    while (x < s.width) {
      while (x < s.width && !s.mask[static_cast<std::size_t>(y * s.width + x)]) ++x;
      const int start = x;
      while (x < s.width && s.mask[static_cast<std::size_t>(y * s.width + x)]) ++x;
      if (x > start) spans.push_back({y, start, x});
    }
  }
  return spans;
}

}  // namespace

std::size_t DepthSprite::mask_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

LightFingerprint LightFingerprint::of(const Light& light) {
  LightFingerprint f;
  f.direction[0] = static_cast<float>(light.direction.x);
  f.direction[1] = static_cast<float>(light.direction.y);
  f.direction[2] = static_cast<float>(light.direction.z);
  f.ambient = static_cast<float>(light.ambient);
  f.diffuse = static_cast<float>(light.diffuse);
  return f;
}

bool operator==(const LightFingerprint& a, const LightFingerprint& b) {
  return std::memcmp(a.direction, b.direction, sizeof(a.direction)) == 0 &&
         std::bit_cast<std::uint32_t>(a.ambient) == std::bit_cast<std::uint32_t>(b.ambient) &&
         std::bit_cast<std::uint32_t>(a.diffuse) == std::bit_cast<std::uint32_t>(b.diffuse);
}

const DepthSprite& SpriteAtlas::sprite(const GlyphSpec& spec) const {
  spec.validate();
  if (sprites.size() != kSpecCount) throw ConsistencyError("atlas does not hold 96 sprites");
  return sprites[static_cast<std::size_t>(spec.key())];
}

bool SpriteAtlas::bitwise_equal(const SpriteAtlas& o) const {
  if (footprint_px != o.footprint_px || canvas_width != o.canvas_width || canvas_height != o.canvas_height ||
      !(light == o.light) || sprites.size() != o.sprites.size()) {
    return false;
  }
  for (std::size_t i = 0; i < sprites.size(); ++i) {
    const auto& a = sprites[i];
    const auto& b = o.sprites[i];
    if (!(a.spec == b.spec) || a.anchor_x != b.anchor_x || a.anchor_y != b.anchor_y || a.luminance != b.luminance ||
        a.mask != b.mask || std::memcmp(a.depth.data(), b.depth.data(), a.depth.size() * sizeof(float)) != 0) {
      return false;
    }
  }
  return true;
}

SpriteAtlas bake_atlas(int footprint_px, const Light& light, const GlyphLibrary& library, int workers) {
  if (footprint_px < kMinFootprint) {
    throw ParameterError("sprite footprint must be at least " + std::to_string(kMinFootprint) + " px");
  }
  light.validate();
  const double upp = 1.0 / footprint_px;

  // Every glyph center sits at local (0.5, 0.5) of its anchor pixel; the
  // canvas is the union of all footprints so anchors are shared.
  detail::PixelRect uni{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
                        std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
  for (int key = 0; key < kSpecCount; ++key) {
    detail::PlacedMesh pm;
    pm.mesh = library.mesh(GlyphSpec::from_key(key)).get();
    const auto r = detail::footprint(pm, upp);
    uni = {std::min(uni.x0, r.x0), std::min(uni.y0, r.y0), std::max(uni.x1, r.x1), std::max(uni.y1, r.y1)};
  }

  SpriteAtlas atlas;
  atlas.footprint_px = footprint_px;
  atlas.canvas_width = uni.x1 - uni.x0;
  atlas.canvas_height = uni.y1 - uni.y0;
  atlas.light = LightFingerprint::of(light);
  atlas.sprites.resize(kSpecCount);
  const int anchor_x = -uni.x0;
  const int anchor_y = -uni.y0;
  if (anchor_x > 0xFFFF || anchor_y > 0xFFFF) throw BakeError("sprite canvas too large");

  parallel_for(kSpecCount, workers, [&](std::size_t key) {
    const GlyphSpec spec = GlyphSpec::from_key(static_cast<int>(key));
    Framebuffer fb(atlas.canvas_width, atlas.canvas_height);
    detail::PlacedMesh pm;
    pm.mesh = library.mesh(spec).get();
    pm.anchor_x = anchor_x;
    pm.anchor_y = anchor_y;
    detail::draw_mesh_rows(fb, pm, upp, light, 0, fb.height());

    // Every arm must leave at least one pixel on its own.
    const GlyphParts& parts = library.parts(spec);
    for (const auto& arm : parts.arms) {
      Framebuffer probe(atlas.canvas_width, atlas.canvas_height);
      detail::PlacedMesh arm_pm = pm;
      arm_pm.mesh = arm.get();
      detail::draw_mesh_rows(probe, arm_pm, upp, light, 0, probe.height());
      if (probe.covered_pixels() == 0) {
        throw BakeError("footprint " + std::to_string(footprint_px) + " px cannot resolve the arms of " +
                        std::string(shape_name(spec.shape)));
      }
    }

    DepthSprite s;
    s.spec = spec;
    s.width = fb.width();
    s.height = fb.height();
    s.anchor_x = anchor_x;
    s.anchor_y = anchor_y;
    const auto n = fb.id.size();
    s.luminance.assign(n, 0);
    s.mask.assign(n, 0);
    s.depth.assign(n, std::numeric_limits<float>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      if (fb.id[i] == kNoInstance) continue;
      s.mask[i] = 1;
      s.luminance[i] = fb.color[i].r;  // white albedo: channel == luminance
      s.depth[i] = fb.depth[i];
    }
    atlas.sprites[key] = std::move(s);
  });
  return atlas;
}

void composite_into(Framebuffer& fb, std::span<const SpriteInstance> instances, const SpriteAtlas& atlas,
                    int workers, CompositeStats* stats) {
  if (atlas.sprites.size() != kSpecCount) throw ConsistencyError("atlas does not hold 96 sprites");
  std::vector<std::vector<Span>> spans(kSpecCount);
  for (std::size_t k = 0; k < spans.size(); ++k) spans[k] = masked_spans(atlas.sprites[k]);
  for (const auto& inst : instances) {
    inst.spec.validate();
    if (inst.id == kNoInstance) throw ParameterError("instance id collides with the background sentinel");
  }

  std::atomic<std::uint64_t> visited{0};
  std::atomic<std::uint64_t> tests{0};
  const int bands = (fb.height() + detail::kBandRows - 1) / detail::kBandRows;
  parallel_for(static_cast<std::size_t>(bands), workers, [&](std::size_t band) {
    const int row0 = static_cast<int>(band) * detail::kBandRows;
    const int row1 = std::min(row0 + detail::kBandRows, fb.height());
    std::uint64_t local_visited = 0;
    std::uint64_t local_tests = 0;
    for (const SpriteInstance& inst : instances) {
      const DepthSprite& s = atlas.sprites[static_cast<std::size_t>(inst.spec.key())];
      const int ox = inst.pixel_x - s.anchor_x;
      const int oy = inst.pixel_y - s.anchor_y;
      if (oy + s.height <= row0 || oy >= row1 || ox + s.width <= 0 || ox >= fb.width()) continue;
      const float offset = inst.z_offset + 0.0f;
      for (const Span& sp : spans[static_cast<std::size_t>(inst.spec.key())]) {
        const int py = oy + sp.y;
        if (py < row0 || py >= row1) continue;
        const int x0 = std::max(sp.x0, -ox);
        const int x1 = std::min(sp.x1, fb.width() - ox);
        for (int sx = x0; sx < x1; ++sx) {
          const auto si = static_cast<std::size_t>(sp.y * s.width + sx);
          const std::size_t idx = fb.index(ox + sx, py);
          const float depth = s.depth[si] + offset;
          ++local_tests;
          if (!detail::depth_wins(depth, inst.id, fb.depth[idx], fb.id[idx])) continue;
          const std::uint8_t lum = s.luminance[si];
          fb.depth[idx] = depth;
          fb.id[idx] = inst.id;
          fb.color[idx] = {modulate(lum, inst.albedo.r), modulate(lum, inst.albedo.g), modulate(lum, inst.albedo.b),
                           255};
        }
        local_visited += static_cast<std::uint64_t>(sp.x1 - sp.x0);
      }
    }
    visited += local_visited;
    tests += local_tests;
  });
  if (stats) {
    stats->sprite_pixels_visited = visited;
    stats->depth_tests = tests;
  }
}

Framebuffer composite(std::span<const SpriteInstance> instances, const SpriteAtlas& atlas, int width, int height,
                      int workers, CompositeStats* stats, Rgba8 background) {
  if (width <= 0 || height <= 0) throw ParameterError("composite viewport must be non-empty");
  Framebuffer fb(width, height, background);
  composite_into(fb, instances, atlas, workers, stats);
  return fb;
}

std::vector<std::uint8_t> serialize_atlas(const SpriteAtlas& atlas) {
  if (atlas.sprites.size() != kSpecCount) throw ConsistencyError("atlas does not hold 96 sprites");
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(atlas.footprint_px));
  w.u32(static_cast<std::uint32_t>(atlas.canvas_width));
  w.u32(static_cast<std::uint32_t>(atlas.canvas_height));
  for (float d : atlas.light.direction) w.f32(d);
  w.f32(atlas.light.ambient);
  w.f32(atlas.light.diffuse);
  for (const DepthSprite& s : atlas.sprites) {
    w.u8(static_cast<std::uint8_t>(s.spec.shape));
    w.u8(static_cast<std::uint8_t>(s.spec.left_arms));
    w.u8(static_cast<std::uint8_t>(s.spec.right_arms));
    w.u16(static_cast<std::uint16_t>(s.anchor_x));
    w.u16(static_cast<std::uint16_t>(s.anchor_y));
    for (std::size_t i = 0; i < s.luminance.size(); ++i) {
      w.u8(s.luminance[i]);
      w.u8(s.mask[i]);
      w.f32(s.depth[i]);
    }
  }
  return w.take();
}

SpriteAtlas deserialize_atlas(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("not a sprite atlas (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw VersionError("unsupported atlas version " + std::to_string(version) + " (expected " +
                       std::to_string(kFormatVersion) + ")");
  }
  SpriteAtlas atlas;
  atlas.footprint_px = static_cast<int>(r.u32());
  atlas.canvas_width = static_cast<int>(r.u32());
  atlas.canvas_height = static_cast<int>(r.u32());
  for (float& d : atlas.light.direction) d = r.f32();
  atlas.light.ambient = r.f32();
  atlas.light.diffuse = r.f32();
  if (atlas.footprint_px <= 0 || atlas.canvas_width <= 0 || atlas.canvas_height <= 0 ||
      atlas.canvas_width > 0xFFFF || atlas.canvas_height > 0xFFFF) {
    throw FormatError("atlas header has invalid dimensions");
  }
  const auto pixels = static_cast<std::size_t>(atlas.canvas_width) * static_cast<std::size_t>(atlas.canvas_height);
  const std::size_t expected = static_cast<std::size_t>(kSpecCount) * (7 + pixels * 6);
  if (r.remaining() < expected) {
    throw TruncationError("atlas truncated: " + std::to_string(r.remaining()) + " sprite bytes, expected " +
                          std::to_string(expected));
  }
  atlas.sprites.resize(kSpecCount);
  for (int key = 0; key < kSpecCount; ++key) {
    DepthSprite s;
    s.spec.shape = static_cast<GlyphShape>(r.u8());
    s.spec.left_arms = r.u8();
    s.spec.right_arms = r.u8();
    if (static_cast<int>(s.spec.shape) >= kShapeCount || s.spec.left_arms > kMaxArms ||
        s.spec.right_arms > kMaxArms || s.spec.key() != key) {
      throw FormatError("atlas sprite records out of order at record " + std::to_string(key));
    }
    s.anchor_x = r.u16();
    s.anchor_y = r.u16();
    s.width = atlas.canvas_width;
    s.height = atlas.canvas_height;
    s.luminance.resize(pixels);
    s.mask.resize(pixels);
    s.depth.resize(pixels);
    for (std::size_t i = 0; i < pixels; ++i) {
      s.luminance[i] = r.u8();
      s.mask[i] = r.u8();
      s.depth[i] = r.f32();
    }
    atlas.sprites[static_cast<std::size_t>(key)] = std::move(s);
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after atlas records");
  return atlas;
}

void save_atlas(const SpriteAtlas& atlas, const std::string& path) {
  const auto bytes = serialize_atlas(atlas);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("failed writing " + path);
}

SpriteAtlas load_atlas(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open atlas " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize_atlas(bytes);
}

}  // namespace glyphscape
