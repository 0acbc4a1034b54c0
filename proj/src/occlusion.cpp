// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/occlusion.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include "glyphscape/error.hpp"
#include "glyphscape/parallel.hpp"

namespace glyphscape {

namespace {

constexpr double kOcclusionSpan = 4.0;

}  // namespace

void OcclusionConfig::validate() const {
  auto check = [](double f) {
    if (!(f > 0.0 && f < 1.0)) throw ParameterError("overlap fraction must lie in (0, 1), got " + std::to_string(f));
  };
  check(overlap);
  for (double f : sweep) check(f);
  if (render_size < 128) throw ParameterError("occlusion render size must be at least 128");
}

double OcclusionResult::diagonal_mean() const {
  double sum = 0.0;
  for (int i = 0; i < kShapeCount; ++i) sum += matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  return sum / kShapeCount;
}

double OcclusionResult::off_diagonal_mean() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < kShapeCount; ++i) {
    for (std::size_t j = 0; j < kShapeCount; ++j) {
      if (i != j) sum += matrix[i][j];
    }
  }
  return sum / (kShapeCount * (kShapeCount - 1));
}

OrthoCamera occlusion_camera(int render_size) {
  return {{0.0, 0.0}, kOcclusionSpan / render_size, render_size, render_size};
}

std::array<RenderInstance, 3> occlusion_scene(GlyphShape test, GlyphShape occluder, double overlap,
                                              const GlyphLibrary& library) {
  const auto& test_mesh = library.mesh({test, 0, 0});
  const auto& occluder_mesh = library.mesh({occluder, 0, 0});
  const double width = bounds(*test_mesh).extent().x;
  const double offset = (1.0 - overlap) * width;
  return {RenderInstance{occluder_mesh, {-offset, 0, 0}, kWhite, kLeftOccluderId},
          RenderInstance{occluder_mesh, {offset, 0, 0}, kWhite, kRightOccluderId},
          RenderInstance{test_mesh, {0, 0, 0}, kWhite, kTestGlyphId}};
}

Framebuffer render_occlusion_cell(GlyphShape test, GlyphShape occluder, const OcclusionConfig& config,
                                  const GlyphLibrary& library) {
  config.validate();
  const auto scene = occlusion_scene(test, occluder, config.overlap, library);
  RasterOptions opts;
  opts.workers = config.workers;
  return rasterize(scene, occlusion_camera(config.render_size), Light::standard(), opts);
}

double run_cell(GlyphShape test, GlyphShape occluder, const OcclusionConfig& config, const GlyphLibrary& library) {
  const Framebuffer fb = render_occlusion_cell(test, occluder, config, library);
  const auto alone =
      silhouette_pixel_count(*library.mesh({test, 0, 0}), occlusion_camera(config.render_size), config.workers);
  if (alone == 0) throw ParameterError("test glyph has an empty silhouette at this render size");
  return static_cast<double>(fb.pixels_with_id(kTestGlyphId)) / static_cast<double>(alone);
}

OcclusionResult run_matrix(const OcclusionConfig& config, const GlyphLibrary& library) {
  config.validate();
  OcclusionResult result;
  result.config = config;
  const OrthoCamera camera = occlusion_camera(config.render_size);
  for (GlyphShape s : kAllShapes) {
    result.unoccluded_counts[static_cast<std::size_t>(s)] =
        silhouette_pixel_count(*library.mesh({s, 0, 0}), camera, config.workers);
  }
  // Cells fan out; each render is itself single-threaded.
  OcclusionConfig cell_config = config;
  cell_config.workers = 1;
  parallel_for(kShapeCount * kShapeCount, config.workers, [&](std::size_t cell) {
    const GlyphShape test = kAllShapes[cell / kShapeCount];
    const GlyphShape occ = kAllShapes[cell % kShapeCount];
    const Framebuffer fb = render_occlusion_cell(test, occ, cell_config, library);
    result.matrix[cell / kShapeCount][cell % kShapeCount] =
        static_cast<double>(fb.pixels_with_id(kTestGlyphId)) /
        static_cast<double>(result.unoccluded_counts[cell / kShapeCount]);
  });
  return result;
}

std::vector<OcclusionResult> run_sweep(const OcclusionConfig& config, const GlyphLibrary& library) {
  config.validate();
  std::vector<OcclusionResult> out;
  const std::vector<double> overlaps = config.sweep.empty() ? std::vector<double>{config.overlap} : config.sweep;
  for (double f : overlaps) {
    OcclusionConfig c = config;
    c.overlap = f;
    c.sweep.clear();
    out.push_back(run_matrix(c, library));
  }
  return out;
}

Framebuffer contact_sheet(const OcclusionConfig& config, const GlyphLibrary& library) {
  config.validate();
  const int cell = config.render_size;
  Framebuffer sheet(cell * kShapeCount, cell * kShapeCount);
  OcclusionConfig cell_config = config;
  cell_config.workers = 1;
  parallel_for(kShapeCount * kShapeCount, config.workers, [&](std::size_t i) {
    const int row = static_cast<int>(i / kShapeCount);
    const int col = static_cast<int>(i % kShapeCount);
    const Framebuffer fb = render_occlusion_cell(kAllShapes[static_cast<std::size_t>(row)],
                                                 kAllShapes[static_cast<std::size_t>(col)], cell_config, library);
    for (int y = 0; y < cell; ++y) {
      for (int x = 0; x < cell; ++x) {
        const auto src = fb.index(x, y);
        const auto dst = sheet.index(col * cell + x, row * cell + y);
        sheet.color[dst] = fb.color[src];
        sheet.depth[dst] = fb.depth[src];
        sheet.id[dst] = fb.id[src];
      }
    }
  });
  return sheet;
}

void write_occlusion_csv(std::ostream& out, std::span<const OcclusionResult> results) {
  out << "overlap,test";
  for (GlyphShape s : kAllShapes) out << ',' << shape_name(s);
  out << '\n';
  char buf[32];
  for (const auto& result : results) {
    std::snprintf(buf, sizeof(buf), "%g", result.config.overlap);
    const std::string overlap = buf;
    for (std::size_t i = 0; i < kShapeCount; ++i) {
      out << overlap << ',' << shape_name(kAllShapes[i]);
      for (std::size_t j = 0; j < kShapeCount; ++j) {
        std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * result.matrix[i][j]);
        out << ',' << buf;
      }
      out << '\n';
    }
  }
}

void write_occlusion_csv(std::ostream& out, const OcclusionResult& result) {
  write_occlusion_csv(out, std::span<const OcclusionResult>(&result, 1));
}

}  // namespace glyphscape
