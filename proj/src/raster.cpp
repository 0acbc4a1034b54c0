// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <unordered_set>

#include "glyphscape/error.hpp"
#include "glyphscape/parallel.hpp"

namespace glyphscape {

Framebuffer::Framebuffer(int width, int height, Rgba8 background) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw ParameterError("framebuffer size must be positive, got " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  color.assign(n, background);
  depth.assign(n, std::numeric_limits<float>::infinity());
  id.assign(n, kNoInstance);
}

std::size_t Framebuffer::covered_pixels() const {
  return static_cast<std::size_t>(std::count_if(id.begin(), id.end(), [](std::uint32_t v) { return v != kNoInstance; }));
}

std::size_t Framebuffer::pixels_with_id(std::uint32_t instance) const {
  return static_cast<std::size_t>(std::count(id.begin(), id.end(), instance));
}

Framebuffer Framebuffer::crop(int x0, int y0, int w, int h) const {
  if (x0 < 0 || y0 < 0 || x0 + w > width_ || y0 + h > height_) {
    throw ParameterError("crop rectangle outside framebuffer");
  }
  Framebuffer out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto src = index(x0 + x, y0 + y);
      const auto dst = out.index(x, y);
      out.color[dst] = color[src];
      out.depth[dst] = depth[src];
      out.id[dst] = id[src];
    }
  }
  return out;
}

bool Framebuffer::bitwise_equal(const Framebuffer& other) const {
  if (width_ != other.width_ || height_ != other.height_) return false;
  const auto n = color.size();
  return std::memcmp(color.data(), other.color.data(), n * sizeof(Rgba8)) == 0 &&
         std::memcmp(depth.data(), other.depth.data(), n * sizeof(float)) == 0 &&
         std::memcmp(id.data(), other.id.data(), n * sizeof(std::uint32_t)) == 0;
}

Vec2 OrthoCamera::to_pixel(Vec2 world) const {
  return {(world.x - center.x) / world_units_per_pixel + width / 2.0,
          (center.y - world.y) / world_units_per_pixel + height / 2.0};
}

Vec2 OrthoCamera::pixel_center_to_world(double px, double py) const {
  return {center.x + (px + 0.5 - width / 2.0) * world_units_per_pixel,
          center.y - (py + 0.5 - height / 2.0) * world_units_per_pixel};
}

void OrthoCamera::validate() const {
  if (width <= 0 || height <= 0) throw ParameterError("camera viewport must be non-empty");
  if (!(world_units_per_pixel > 0.0) || !std::isfinite(world_units_per_pixel)) {
    throw ParameterError("worldUnitsPerPixel must be positive");
  }
}

void Light::validate() const {
  if (std::abs(length(direction) - 1.0) > 1e-9) throw ParameterError("light direction must be unit length");
  if (ambient < 0.0 || ambient > 1.0 || diffuse < 0.0 || diffuse > 1.0) {
    throw ParameterError("light ambient/diffuse must lie in [0, 1]");
  }
  if (ambient + diffuse > 1.0 + 1e-12) throw ParameterError("ambient + diffuse must not exceed 1");
}

std::uint8_t shade(Vec3 normal, const Light& light) {
  const double lambert = std::max(0.0, -dot(normal, light.direction));
  const double intensity = std::clamp(light.ambient + light.diffuse * lambert, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(intensity * 255.0));
}

std::uint32_t pick(const Framebuffer& fb, int x, int y) {
  if (!fb.contains(x, y)) {
    throw ParameterError("pick coordinate (" + std::to_string(x) + ", " + std::to_string(y) +
                         ") outside " + std::to_string(fb.width()) + "x" + std::to_string(fb.height()));
  }
  return fb.id[fb.index(x, y)];
}

namespace detail {

void snap_to_grid(double pixel, int& anchor, double& frac) {
  const double base = std::floor(pixel);
  double snapped = std::round((pixel - base) * kSubpixelSteps) / kSubpixelSteps;
  double a = base;
  if (snapped >= 1.0) {
    snapped -= 1.0;
    a += 1.0;
  }
  anchor = static_cast<int>(a);
  frac = snapped;
}

PixelRect footprint(const PlacedMesh& placed, double upp) {
  const Bounds3 b = bounds(*placed.mesh);
  const double min_x = b.min.x / upp + placed.frac_x;
  const double max_x = b.max.x / upp + placed.frac_x;
  const double min_y = -b.max.y / upp + placed.frac_y;
  const double max_y = -b.min.y / upp + placed.frac_y;
  return {placed.anchor_x + static_cast<int>(std::floor(min_x)) - 1,
          placed.anchor_y + static_cast<int>(std::floor(min_y)) - 1,
          placed.anchor_x + static_cast<int>(std::ceil(max_x)) + 1,
          placed.anchor_y + static_cast<int>(std::ceil(max_y)) + 1};
}

bool depth_wins(float depth, std::uint32_t id, float current_depth, std::uint32_t current_id) {
  return depth < current_depth || (depth == current_depth && id < current_id);
}

namespace {

struct LocalVertex {
  double x;
  double y;
  double depth;
};

}  // namespace

void draw_mesh_rows(Framebuffer& fb, const PlacedMesh& placed, double upp, const Light& light, int row0,
                    int row1) {
  const Mesh& mesh = *placed.mesh;
  row0 = std::max(row0, 0);
  row1 = std::min(row1, fb.height());
  if (row0 >= row1 || mesh.empty()) return;

  thread_local std::vector<LocalVertex> local;
  local.resize(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& v = mesh.vertices[i];
    local[i] = {v.x / upp + placed.frac_x, -v.y / upp + placed.frac_y, -v.z};
  }

  const int ax = placed.anchor_x;
  const int ay = placed.anchor_y;
  // Normalizes -0.0 so sprite replay (which adds the offset to a stored
  // depth) sees the same bits.
  const float offset = placed.depth_offset + 0.0f;

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    const Vec3 fn = face_normal(mesh, t);
    if (fn.z <= 0.0) continue;  // back-facing

    std::size_t i0 = tri[0];
    std::size_t i1 = tri[1];
    std::size_t i2 = tri[2];
    LocalVertex a = local[i0];
    LocalVertex b = local[i1];
    LocalVertex c = local[i2];
    double area = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (area == 0.0) continue;
    if (area < 0.0) {
      std::swap(b, c);
      std::swap(i1, i2);
      area = -area;
    }

    const double min_x = std::min({a.x, b.x, c.x});
    const double max_x = std::max({a.x, b.x, c.x});
    const double min_y = std::min({a.y, b.y, c.y});
    const double max_y = std::max({a.y, b.y, c.y});
    // Pixel p is sampled at local (p - anchor + 0.5).
    const int px0 = std::max(ax + static_cast<int>(std::ceil(min_x - 0.5)), 0);
    const int px1 = std::min(ax + static_cast<int>(std::floor(max_x - 0.5)) + 1, fb.width());
    const int py0 = std::max(ay + static_cast<int>(std::ceil(min_y - 0.5)), row0);
    const int py1 = std::min(ay + static_cast<int>(std::floor(max_y - 0.5)) + 1, row1);
    if (px0 >= px1 || py0 >= py1) continue;

    const bool smooth = mesh.smooth[t] != 0;
    const Vec3 flat_normal = normalized(fn);
    const Vec3 n0 = mesh.normals[i0];
    const Vec3 n1 = mesh.normals[i1];
    const Vec3 n2 = mesh.normals[i2];
    const double inv_area = 1.0 / area;

    for (int py = py0; py < py1; ++py) {
      const double sy = static_cast<double>(py - ay) + 0.5;
      for (int px = px0; px < px1; ++px) {
        const double sx = static_cast<double>(px - ax) + 0.5;
        const double w0 = (c.x - b.x) * (sy - b.y) - (c.y - b.y) * (sx - b.x);
        const double w1 = (a.x - c.x) * (sy - c.y) - (a.y - c.y) * (sx - c.x);
        const double w2 = (b.x - a.x) * (sy - a.y) - (b.y - a.y) * (sx - a.x);
        if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;

        const double l0 = w0 * inv_area;
        const double l1 = w1 * inv_area;
        const double l2 = w2 * inv_area;
        const float local_depth = static_cast<float>(l0 * a.depth + l1 * b.depth + l2 * c.depth);
        const float depth = local_depth + offset;
        const std::size_t idx = fb.index(px, py);
        if (!depth_wins(depth, placed.id, fb.depth[idx], fb.id[idx])) continue;

        const Vec3 normal = smooth ? normalized(n0 * l0 + n1 * l1 + n2 * l2) : flat_normal;
        const std::uint8_t lum = shade(normal, light);
        fb.depth[idx] = depth;
        fb.id[idx] = placed.id;
        fb.color[idx] = {modulate(lum, placed.albedo.r), modulate(lum, placed.albedo.g),
                         modulate(lum, placed.albedo.b), 255};
      }
    }
  }
}

}  // namespace detail

Framebuffer rasterize(std::span<const RenderInstance> instances, const OrthoCamera& camera,
                      const Light& light, const RasterOptions& options) {
  camera.validate();
  light.validate();
  Framebuffer fb(camera.width, camera.height, options.background);

  std::vector<detail::PlacedMesh> placed;
  std::vector<detail::PixelRect> rects;
  placed.reserve(instances.size());
  std::unordered_set<std::uint32_t> seen;
  for (const RenderInstance& inst : instances) {
    if (!inst.mesh) throw ParameterError("render instance without mesh");
    if (inst.id == kNoInstance) throw ParameterError("instance id collides with the background sentinel");
    if (!seen.insert(inst.id).second) {
      throw ParameterError("duplicate instance id " + std::to_string(inst.id));
    }
    const Vec2 p = camera.to_pixel({inst.position.x, inst.position.y});
    detail::PlacedMesh pm;
    pm.mesh = inst.mesh.get();
    detail::snap_to_grid(p.x, pm.anchor_x, pm.frac_x);
    detail::snap_to_grid(p.y, pm.anchor_y, pm.frac_y);
    pm.depth_offset = static_cast<float>(-inst.position.z);
    pm.albedo = inst.albedo;
    pm.id = inst.id;
    placed.push_back(pm);
  }
  std::sort(placed.begin(), placed.end(),
            [](const detail::PlacedMesh& a, const detail::PlacedMesh& b) { return a.id < b.id; });
  rects.reserve(placed.size());
  for (const auto& pm : placed) rects.push_back(detail::footprint(pm, camera.world_units_per_pixel));

  const int bands = (camera.height + detail::kBandRows - 1) / detail::kBandRows;
  parallel_for(static_cast<std::size_t>(bands), resolve_workers(options.workers), [&](std::size_t band) {
    const int row0 = static_cast<int>(band) * detail::kBandRows;
    const int row1 = std::min(row0 + detail::kBandRows, camera.height);
    for (std::size_t i = 0; i < placed.size(); ++i) {
      const auto& r = rects[i];
      if (r.y1 <= row0 || r.y0 >= row1 || r.x1 <= 0 || r.x0 >= camera.width) continue;
      detail::draw_mesh_rows(fb, placed[i], camera.world_units_per_pixel, light, row0, row1);
    }
  });
  return fb;
}

std::size_t silhouette_pixel_count(const Mesh& mesh, const OrthoCamera& camera, int workers) {
  if (mesh.empty()) return 0;
  // Non-owning alias; the mesh outlives the call.
  RenderInstance inst{std::shared_ptr<const Mesh>(std::shared_ptr<const Mesh>{}, &mesh), {0, 0, 0}, kWhite, 0};
  RasterOptions opts;
  opts.workers = workers;
  return rasterize(std::span(&inst, 1), camera, Light::standard(), opts).covered_pixels();
}

}  // namespace glyphscape
