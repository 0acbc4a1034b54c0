// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "glyphscape/binning.hpp"
#include "glyphscape/error.hpp"
#include "glyphscape/image_io.hpp"
#include "glyphscape/mapping.hpp"
#include "glyphscape/occlusion.hpp"
#include "glyphscape/pca.hpp"
#include "glyphscape/scene.hpp"
#include "glyphscape/sprites.hpp"
#include "glyphscape/synthetic.hpp"

namespace py = pybind11;
using namespace glyphscape;

namespace {

// Column order follows the dict's insertion order.
Dataset to_dataset(const py::dict& columns) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  for (const auto& [k, v] : columns) {
    names.push_back(py::cast<std::string>(k));
    values.push_back(py::cast<std::vector<double>>(v));
  }
  return Dataset(std::move(names), std::move(values));
}

py::dict from_dataset(const Dataset& d) {
  py::dict out;
  for (std::size_t i = 0; i < d.column_count(); ++i) out[py::str(d.column_names()[i])] = d.column(i);
  return out;
}

py::bytes render(const py::dict& columns, const std::string& mapping_json, int width, int height,
                 std::optional<std::array<double, 4>> lens, bool direct, int workers) {
  const Dataset data = to_dataset(columns);
  const ChannelMapping mapping = parse_mapping(mapping_json);
  const BoundScene scene = bind(data, mapping);
  PlotFrame frame;
  frame.width = width;
  frame.height = height;
  frame.footprint_px = mapping.footprint_px;
  frame.legend = mapping.legend;
  frame.workers = workers;
  LensParams lp;
  if (lens) {
    lp = {{(*lens)[0], (*lens)[1]}, (*lens)[2], (*lens)[3]};
    lp.validate();
  }
  std::vector<std::uint8_t> png;
  {
    py::gil_scoped_release release;
    const Light light = Light::standard();
    std::optional<SpriteAtlas> atlas;
    if (!direct) atlas = bake_atlas(frame.footprint_px, light, GlyphLibrary::standard(), workers);
    const auto fb = render_plot(scene.instances, {}, frame, light, lp, direct ? RenderPath::kDirect : RenderPath::kSprite,
                                atlas ? &*atlas : nullptr, &scene.legend);
    png = encode_png(fb);
  }
  return py::bytes(reinterpret_cast<const char*>(png.data()), png.size());
}

}  // namespace

PYBIND11_MODULE(_glyphscape, m) {
  m.doc() = "Occlusion-robust 3D glyph scatterplots";

  // Base first: later registrations are tried first.
  const auto base = py::register_exception<Error>(m, "GlyphscapeError", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<IngestionError>(m, "IngestionError", base.ptr());
  py::register_exception<BindError>(m, "BindError", base.ptr());

  m.attr("SHAPES") = [] {
    std::vector<std::string> names;
    for (GlyphShape s : kAllShapes) names.emplace_back(shape_name(s));
    return names;
  }();

  m.def("synthetic_events", [](std::size_t rows, std::uint64_t seed) { return from_dataset(synthetic_events(rows, seed)); },
        py::arg("rows"), py::arg("seed") = 7);

  m.def("even_bins", [](const std::vector<double>& v, int k) { return even_bins(v, k).edges(); }, py::arg("values"),
        py::arg("k"));
  m.def(
      "rebalance_bins",
      [](const std::vector<double>& v, std::vector<double> edges, int iterations) {
        return rebalance_bins(v, BinSpec(std::move(edges)), iterations).edges();
      },
      py::arg("values"), py::arg("edges"), py::arg("iterations") = 1);
  m.def(
      "bin_counts",
      [](const std::vector<double>& v, std::vector<double> edges) { return bin_counts(v, BinSpec(std::move(edges))); },
      py::arg("values"), py::arg("edges"));

  m.def(
      "pca",
      [](const py::dict& columns, std::vector<std::string> names, int components, bool standardize) {
        const Dataset d = to_dataset(columns);
        if (names.empty()) names = d.column_names();
        const PcaResult r = pca(d, names, components, standardize);
        py::dict out;
        out["columns"] = r.columns;
        out["mean"] = r.mean;
        out["scales"] = r.scales;
        out["components"] = r.components;
        out["eigenvalues"] = r.eigenvalues;
        out["scores"] = r.scores;
        out["outlier_rank"] = outlier_rank(r);
        return out;
      },
      py::arg("columns"), py::arg("names") = std::vector<std::string>{}, py::arg("components") = 3,
      py::arg("standardize") = true);

  m.def(
      "occlusion_matrix",
      [](double overlap, int size) {
        OcclusionConfig c;
        c.overlap = overlap;
        c.render_size = size;
        OcclusionResult r;
        {
          py::gil_scoped_release release;
          r = run_matrix(c);
        }
        std::vector<std::vector<double>> rows;
        for (const auto& row : r.matrix) rows.emplace_back(row.begin(), row.end());
        return rows;
      },
      py::arg("overlap") = 0.95, py::arg("size") = 512,
      "Visible fraction of each test glyph (row) between two occluders (column).");

  m.def(
      "lens_transform",
      [](double x, double y, double fx, double fy, double radius, double magnification) {
        LensParams lens{{fx, fy}, radius, magnification};
        lens.validate();
        const Vec2 p = lens_transform({x, y}, lens);
        return std::pair{p.x, p.y};
      },
      py::arg("x"), py::arg("y"), py::arg("fx"), py::arg("fy"), py::arg("radius"), py::arg("magnification"));

  m.def("render_png", &render, py::arg("columns"), py::arg("mapping"), py::arg("width") = 1024,
        py::arg("height") = 1024, py::arg("lens") = std::nullopt, py::arg("direct") = false, py::arg("workers") = 0,
        "PNG bytes of the plot; `lens` is (fx, fy, radius, magnification) in pixels.");
}
