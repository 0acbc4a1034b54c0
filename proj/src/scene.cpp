// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include "glyphscape/error.hpp"
#include "json.hpp"

namespace glyphscape {

using nlohmann::json;

namespace {

std::vector<double> axis_values(const Dataset& data, const AxisRef& axis, const PcaResult* pca) {
  if (axis.is_pca()) return pca->score_column(static_cast<std::size_t>(axis.pca_component));
  return data.column(axis.column);
}

// Resolves a channel's bins and maps every row, turning domain errors into
// bind errors that name the channel.
std::vector<int> bin_rows(const std::vector<double>& values, const BinSource& source, const std::string& channel,
                          BinSpec& resolved) {
  try {
    resolved = source.resolve(values);
  } catch (const ParameterError& e) {
    throw ParameterError(channel + ": " + e.what());
  }
  std::vector<int> out(values.size());
  for (std::size_t r = 0; r < values.size(); ++r) {
    try {
      out[r] = resolved.bin_of(values[r], r);
    } catch (const DomainError& e) {
      throw BindError(channel + ": " + e.what(), r, channel);
    }
  }
  return out;
}

// Coverage of one thick segment (capsule) clipped to rows [row0, row1).
template <typename Fn>
void for_capsule_pixels(Vec2 a, Vec2 b, double radius, int width, int height, Fn&& fn) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  const auto dist2 = [&](double px, double py) {
    const Vec2 p{px - a.x, py - a.y};
    double t = len2 > 0.0 ? dot(p, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 q{p.x - t * d.x, p.y - t * d.y};
    return dot(q, q);
  };
  const int y_lo = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - radius - 1.0)));
  const int y_hi = std::min(height - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + radius + 1.0)));
  const double r2 = radius * radius;
  for (int y = y_lo; y <= y_hi; ++y) {
    const double cy = y + 0.5;
    // x-range of the segment's infinite band on this row, widened by the radius.
    double lo = std::min(a.x, b.x) - radius - 1.0;
    double hi = std::max(a.x, b.x) + radius + 1.0;
    if (std::abs(d.y) > 1e-12) {
      const double t0 = std::clamp((cy - radius - a.y) / d.y, 0.0, 1.0);
      const double t1 = std::clamp((cy + radius - a.y) / d.y, 0.0, 1.0);
      const double xa = a.x + std::min(t0, t1) * d.x;
      const double xb = a.x + std::max(t0, t1) * d.x;
      lo = std::max(lo, std::min(xa, xb) - radius - 1.0);
      hi = std::min(hi, std::max(xa, xb) + radius + 1.0);
    }
    const int x_lo = std::max(0, static_cast<int>(std::floor(lo)));
    const int x_hi = std::min(width - 1, static_cast<int>(std::ceil(hi)));
    for (int x = x_lo; x <= x_hi; ++x) {
      if (dist2(x + 0.5, cy) <= r2) fn(x, y);
    }
  }
}

std::uint8_t blend(std::uint8_t under, std::uint8_t over, double alpha) {
  return static_cast<std::uint8_t>(std::lround(under * (1.0 - alpha) + over * alpha));
}

constexpr Rgba8 kLegendBackground{236, 236, 236, 255};

void draw_legend(Framebuffer& fb, const Legend& legend, int x0, const Light& light) {
  const int w = fb.width() - x0;
  if (w <= 0) return;
  for (int y = 0; y < fb.height(); ++y) {
    for (int x = x0; x < fb.width(); ++x) fb.color[fb.index(x, y)] = kLegendBackground;
  }
  // Glyph swatches are rendered off-screen and copied in as color only, so
  // the legend never shows up in the id buffer.
  const int cell = std::max(16, std::min(w / 2, fb.height() / 12));
  const int footprint = std::max(8, cell * 2 / 5);
  std::vector<RenderInstance> swatches;
  const auto& lib = GlyphLibrary::standard();
  const int strip_h = fb.height();
  OrthoCamera cam;
  cam.width = w;
  cam.height = strip_h;
  cam.world_units_per_pixel = 1.0 / footprint;
  std::uint32_t next = 0;
  int cy = cell / 2 + 4;
  const auto place = [&](const GlyphSpec& spec, int px, int py, Rgb8 albedo) {
    RenderInstance ri;
    ri.mesh = lib.mesh(spec);
    const Vec2 wpos = cam.pixel_center_to_world(px, py);
    ri.position = {wpos.x, wpos.y, 0.0};
    ri.albedo = albedo;
    ri.id = next++;
    swatches.push_back(ri);
  };
  const Rgb8 neutral = legend.fixed_hue;
  for (GlyphShape s : legend.shapes) {
    if (cy + cell / 2 > strip_h) break;
    place({s, 0, 0}, w / 2, cy, neutral);
    cy += cell;
  }
  if (legend.left_arms || legend.right_arms) {
    for (int arms = 0; arms <= kMaxArms && cy + cell / 2 <= strip_h; ++arms) {
      const GlyphShape base = legend.shapes.empty() ? GlyphShape::kSphere : legend.shapes.front();
      place({base, legend.left_arms ? arms : 0, legend.right_arms ? arms : 0}, w / 2, cy, neutral);
      cy += cell;
    }
  }
  if (!swatches.empty()) {
    const Framebuffer sw = rasterize(swatches, cam, light, {1, kLegendBackground});
    for (int y = 0; y < strip_h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = sw.index(x, y);
        if (sw.id[i] != kNoInstance) fb.color[fb.index(x0 + x, y)] = sw.color[i];
      }
    }
  }
  if (legend.hue_mapped) {
    const int bar_w = std::max(4, w / 6);
    const int top = std::min(cy + 4, strip_h - 1);
    const int bottom = strip_h - 8;
    for (int y = top; y < bottom; ++y) {
      const double t = bottom - top > 1 ? 1.0 - static_cast<double>(y - top) / (bottom - top - 1) : 0.5;
      const Rgb8 c = colormap(t);
      for (int x = x0 + (w - bar_w) / 2; x < x0 + (w + bar_w) / 2; ++x) fb.color[fb.index(x, y)] = {c.r, c.g, c.b, 255};
    }
  }
}

}  // namespace

PcaResult mapping_pca(const Dataset& data, const ChannelMapping& mapping) {
  const auto& cols = mapping.pca.columns.empty() ? data.column_names() : mapping.pca.columns;
  const int n = static_cast<int>(std::min(cols.size(), kMaxPcaColumns));
  return pca(data, cols, std::max(n, mapping.pca_components_needed()), mapping.pca.standardize);
}

BoundScene bind(const Dataset& data, const ChannelMapping& mapping, const PcaResult* pca_cache) {
  mapping.validate(data);
  BoundScene out;
  const std::size_t rows = data.row_count();
  const PcaResult* pcs = nullptr;
  if (mapping.pca_components_needed() > 0) {
    if (pca_cache && pca_cache->component_count() >= static_cast<std::size_t>(mapping.pca_components_needed()) &&
        pca_cache->row_count() == rows) {
      out.pca = *pca_cache;
    } else {
      out.pca = mapping_pca(data, mapping);
    }
    pcs = &*out.pca;
  }
  const auto xs = axis_values(data, mapping.x, pcs);
  const auto ys = axis_values(data, mapping.y, pcs);

  const auto& shape_values = data.column(mapping.shape.column);
  BinSpec shape_spec;
  const auto shape_bins = bin_rows(shape_values, mapping.shape.bins, "shape", shape_spec);
  out.bins["shape"] = shape_spec;

  std::vector<int> left(rows, 0);
  std::vector<int> right(rows, 0);
  if (!mapping.left_arms.column.empty()) {
    BinSpec spec;
    left = bin_rows(data.column(mapping.left_arms.column), mapping.left_arms.bins, "leftArms", spec);
    out.bins["leftArms"] = spec;
  }
  if (!mapping.right_arms.column.empty()) {
    BinSpec spec;
    right = bin_rows(data.column(mapping.right_arms.column), mapping.right_arms.bins, "rightArms", spec);
    out.bins["rightArms"] = spec;
  }
  // Degenerate (constant-column) arm bins hold one bin; arms stay in 0..3.
  for (auto* v : {&left, &right}) {
    for (int& a : *v) a = std::min(a, kMaxArms);
  }

  std::vector<double> hue_t;
  Legend& lg = out.legend;
  if (!mapping.hue.column.empty()) {
    const auto& hv = data.column(mapping.hue.column);
    double lo = *std::min_element(hv.begin(), hv.end());
    double hi = *std::max_element(hv.begin(), hv.end());
    if (mapping.hue.range) {
      lo = (*mapping.hue.range)[0];
      hi = (*mapping.hue.range)[1];
    }
    hue_t.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) hue_t[r] = hi > lo ? (hv[r] - lo) / (hi - lo) : 0.5;
    lg.hue_source = mapping.hue.column;
    lg.hue_range = {lo, hi};
  } else if (!mapping.hue.within_bin.empty()) {
    const auto& w = mapping.hue.within_bin;
    const std::string& col = w == "shape" ? mapping.shape.column
                             : w == "leftArms" ? mapping.left_arms.column
                                               : mapping.right_arms.column;
    hue_t = within_bin_position(data.column(col), out.bins.at(w));
    lg.hue_source = "withinBin:" + w;
  }
  lg.hue_mapped = !hue_t.empty();
  lg.fixed_hue = mapping.hue.fixed;

  std::vector<double> z(rows, 0.0);
  if (mapping.depth_split) {
    const auto& dv = data.column(mapping.depth_split->column);
    for (std::size_t r = 0; r < rows; ++r) {
      if (dv[r] == 1.0) {
        z[r] = mapping.depth_split->near_offset;
      } else if (dv[r] == 0.0) {
        z[r] = mapping.depth_split->far_offset;
      } else {
        throw BindError("depthSplit: value at row " + std::to_string(r) + " is not 0 or 1", r, "depthSplit");
      }
    }
  }

  out.instances.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    auto& g = out.instances[r];
    g.record_index = r;
    g.shape_bin = shape_bins[r];
    g.spec = {mapping.shape.order[static_cast<std::size_t>(shape_bins[r])], left[r], right[r]};
    g.position = {xs[r], ys[r]};
    g.z_offset = z[r];
    g.hue = hue_t.empty() ? mapping.hue.fixed : colormap(hue_t[r]);
  }

  lg.x_label = mapping.x.label();
  lg.y_label = mapping.y.label();
  for (int b = 0; b < shape_spec.k(); ++b) lg.shapes.push_back(mapping.shape.order[static_cast<std::size_t>(b)]);
  lg.left_arms = !mapping.left_arms.column.empty();
  lg.right_arms = !mapping.right_arms.column.empty();
  lg.bins.push_back({"shape", mapping.shape.column, shape_spec.edges()});
  if (lg.left_arms) lg.bins.push_back({"leftArms", mapping.left_arms.column, out.bins.at("leftArms").edges()});
  if (lg.right_arms) lg.bins.push_back({"rightArms", mapping.right_arms.column, out.bins.at("rightArms").edges()});
  lg.depth_split = mapping.depth_split;
  return out;
}

std::string Legend::to_json() const {
  json j;
  j["x"] = x_label;
  j["y"] = y_label;
  json shapes_j = json::array();
  for (auto s : shapes) shapes_j.push_back(std::string(shape_name(s)));
  j["shapes"] = shapes_j;
  if (hue_mapped) {
    j["hue"] = {{"source", hue_source}, {"range", {hue_range[0], hue_range[1]}}};
  } else {
    j["hue"] = {{"color", {fixed_hue.r, fixed_hue.g, fixed_hue.b}}};
  }
  json b = json::object();
  for (const auto& c : bins) b[c.channel] = {{"column", c.column}, {"edges", c.edges}};
  j["bins"] = b;
  if (depth_split) {
    j["depthSplit"] = {
        {"column", depth_split->column}, {"near", depth_split->near_offset}, {"far", depth_split->far_offset}};
  }
  return j.dump();
}

void EdgeSet::validate(std::size_t instance_count) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("edge alpha must lie in (0, 1)");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.a >= instance_count || e.b >= instance_count) {
      throw ParameterError("edge " + std::to_string(i) + " references a missing record");
    }
    if (e.width_px < 1 || e.width_px > 4) throw ParameterError("edge widths must be 1..4 px");
  }
}

std::vector<RawEdge> parse_edges_csv(std::string_view text) {
  std::vector<RawEdge> out;
  std::size_t start = 0;
  bool first = true;
  std::size_t line_no = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::size_t s = 0;
    for (;;) {
      const auto c = line.find(',', s);
      cells.push_back(line.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    const bool was_first = first;
    first = false;
    if (cells.size() < 2 || cells.size() > 3) {
      throw ParameterError("edges line " + std::to_string(line_no) + ": expected 2 or 3 columns");
    }
    const auto a = parse_number(cells[0]);
    const auto b = parse_number(cells[1]);
    if (!a || !b) {
      if (was_first) continue;  // header
      throw ParameterError("edges line " + std::to_string(line_no) + ": non-numeric index");
    }
    if (*a < 0 || *b < 0 || *a != std::floor(*a) || *b != std::floor(*b)) {
      throw ParameterError("edges line " + std::to_string(line_no) + ": indices must be non-negative integers");
    }
    RawEdge e{static_cast<std::size_t>(*a), static_cast<std::size_t>(*b), std::nullopt};
    if (cells.size() == 3) {
      e.length = parse_number(cells[2]);
      if (!e.length) throw ParameterError("edges line " + std::to_string(line_no) + ": non-numeric length");
    }
    out.push_back(e);
  }
  return out;
}

std::vector<RawEdge> load_edges_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot open edges " + path);
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_edges_csv(text);
}

EdgeSet bind_edges(const std::vector<RawEdge>& raw, const ChannelMapping& mapping, std::size_t instance_count) {
  EdgeSet set;
  set.alpha = mapping.edge_alpha;
  std::vector<double> lengths;
  for (const auto& e : raw) {
    if (e.length) lengths.push_back(*e.length);
  }
  std::optional<BinSpec> spec;
  if (mapping.edge_width && !lengths.empty()) spec = mapping.edge_width->bins.resolve(lengths);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    Edge e{raw[i].a, raw[i].b, 1};
    if (spec && raw[i].length) {
      try {
        e.width_px = std::min(spec->bin_of(*raw[i].length, i), 3) + 1;
      } catch (const DomainError& err) {
        throw BindError(std::string("edgeWidth: ") + err.what(), i, "edgeWidth");
      }
    }
    set.edges.push_back(e);
  }
  set.validate(instance_count);
  return set;
}

void LensParams::validate() const {
  if (!(radius_px > 0.0) || !std::isfinite(radius_px)) throw ParameterError("lens radius must be positive");
  if (!(magnification >= 0.0) || !std::isfinite(magnification)) {
    throw ParameterError("lens magnification must be non-negative");
  }
  if (!std::isfinite(focus.x) || !std::isfinite(focus.y)) throw ParameterError("lens focus must be finite");
}

Vec2 lens_transform(Vec2 p, const LensParams& lens) {
  const double d = lens.magnification;
  if (d == 0.0) return p;
  const Vec2 v{p.x - lens.focus.x, p.y - lens.focus.y};
  const double r = std::sqrt(v.x * v.x + v.y * v.y);
  if (r >= lens.radius_px) return p;
  const double u = r / lens.radius_px;
  // u'/u = (d + 1) / (d u + 1), which is finite at u = 0.
  const double gain = (d + 1.0) / (d * u + 1.0);
  return {lens.focus.x + v.x * gain, lens.focus.y + v.y * gain};
}

Vec2 PlotLayout::to_pixel(Vec2 data) const {
  const double sx = data_max.x > data_min.x ? (data.x - data_min.x) / (data_max.x - data_min.x) : 0.5;
  const double sy = data_max.y > data_min.y ? (data.y - data_min.y) / (data_max.y - data_min.y) : 0.5;
  return {x0 + sx * (x1 - x0), y1 - sy * (y1 - y0)};
}

PlotLayout make_layout(const std::vector<GlyphInstance>& instances, const PlotFrame& frame) {
  if (frame.width <= 0 || frame.height <= 0) throw ParameterError("plot size must be positive");
  PlotLayout l;
  const int strip = frame.legend ? std::max(48, frame.width / 8) : 0;
  l.legend_x0 = frame.width - strip;
  const double margin = frame.footprint_px;
  l.x0 = margin;
  l.x1 = std::max(l.x0 + 1.0, l.legend_x0 - margin);
  l.y0 = margin;
  l.y1 = std::max(l.y0 + 1.0, frame.height - margin);
  if (instances.empty()) return l;
  l.data_min = l.data_max = instances.front().position;
  for (const auto& g : instances) {
    l.data_min.x = std::min(l.data_min.x, g.position.x);
    l.data_min.y = std::min(l.data_min.y, g.position.y);
    l.data_max.x = std::max(l.data_max.x, g.position.x);
    l.data_max.y = std::max(l.data_max.y, g.position.y);
  }
  return l;
}

std::vector<std::array<int, 2>> glyph_pixels(const std::vector<GlyphInstance>& instances, const PlotLayout& layout,
                                             const LensParams& lens) {
  std::vector<std::array<int, 2>> out(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Vec2 p = lens_transform(layout.to_pixel(instances[i].position), lens);
    out[i] = {static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))};
  }
  return out;
}

Framebuffer render_plot(const std::vector<GlyphInstance>& instances, const EdgeSet& edges, const PlotFrame& frame,
                        const Light& light, const LensParams& lens, RenderPath path, const SpriteAtlas* atlas,
                        const Legend* legend) {
  lens.validate();
  light.validate();
  edges.validate(instances.size());
  if (frame.footprint_px < kMinFootprint) throw ParameterError("footprint must be at least 16 px");
  if (path == RenderPath::kSprite) {
    if (!atlas) throw ParameterError("sprite path needs an atlas");
    if (!(atlas->light == LightFingerprint::of(light))) {
      throw ConsistencyError("atlas was baked under a different light");
    }
    if (atlas->footprint_px != frame.footprint_px) {
      throw ConsistencyError("atlas footprint " + std::to_string(atlas->footprint_px) + " px does not match plot " +
                             std::to_string(frame.footprint_px) + " px");
    }
  }

  const PlotLayout layout = make_layout(instances, frame);
  const auto px = glyph_pixels(instances, layout, lens);
  Framebuffer fb(frame.width, frame.height);

  // Edge layer: blended color only; depth and id stay at background.
  const double a = edges.alpha;
  for (const auto& e : edges.edges) {
    if (e.a == e.b) continue;
    const Vec2 p{px[e.a][0] + 0.5, px[e.a][1] + 0.5};
    const Vec2 q{px[e.b][0] + 0.5, px[e.b][1] + 0.5};
    for_capsule_pixels(p, q, 0.5 * e.width_px, fb.width(), fb.height(), [&](int x, int y) {
      auto& c = fb.color[fb.index(x, y)];
      c = {blend(c.r, kEdgeColor.r, a), blend(c.g, kEdgeColor.g, a), blend(c.b, kEdgeColor.b, a), 255};
    });
  }

  if (path == RenderPath::kSprite) {
    std::vector<SpriteInstance> sprites(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const auto& g = instances[i];
      sprites[i] = {g.spec, px[i][0], px[i][1], static_cast<float>(g.z_offset), g.hue, static_cast<std::uint32_t>(i)};
    }
    composite_into(fb, sprites, *atlas, frame.workers);
  } else {
    OrthoCamera cam;
    cam.width = frame.width;
    cam.height = frame.height;
    cam.world_units_per_pixel = 1.0 / frame.footprint_px;
    const auto& lib = GlyphLibrary::standard();
    std::vector<RenderInstance> ri(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const Vec2 w = cam.pixel_center_to_world(px[i][0], px[i][1]);
      ri[i] = {lib.mesh(instances[i].spec), {w.x, w.y, -instances[i].z_offset}, instances[i].hue,
               static_cast<std::uint32_t>(i)};
    }
    const Framebuffer glyphs = rasterize(ri, cam, light, {frame.workers, kBackground});
    for (std::size_t i = 0; i < glyphs.id.size(); ++i) {
      if (glyphs.id[i] == kNoInstance) continue;
      fb.color[i] = glyphs.color[i];
      fb.depth[i] = glyphs.depth[i];
      fb.id[i] = glyphs.id[i];
    }
  }

  if (frame.legend && legend) {
    // The strip sits on top of everything, so it also masks glyphs that
    // spill into it.
    for (int y = 0; y < fb.height(); ++y) {
      for (int x = layout.legend_x0; x < fb.width(); ++x) {
        const std::size_t i = fb.index(x, y);
        fb.depth[i] = std::numeric_limits<float>::infinity();
        fb.id[i] = kNoInstance;
      }
    }
    draw_legend(fb, *legend, layout.legend_x0, light);
  }
  return fb;
}

std::string RecordView::to_json() const {
  json j;
  j["record"] = record_index;
  json vals = json::object();
  for (const auto& [k, v] : values) vals[k] = v;
  j["values"] = vals;
  j["glyph"] = {{"shape", std::string(shape_name(glyph.spec.shape))},
                {"shapeBin", glyph.shape_bin},
                {"leftArms", glyph.spec.left_arms},
                {"rightArms", glyph.spec.right_arms},
                {"hue", {glyph.hue.r, glyph.hue.g, glyph.hue.b}},
                {"zOffset", glyph.z_offset},
                {"x", glyph.position.x},
                {"y", glyph.position.y}};
  return j.dump();
}

std::optional<RecordView> probe(const Framebuffer& fb, int x, int y, const std::vector<GlyphInstance>& instances,
                                const Dataset& data) {
  const std::uint32_t id = pick(fb, x, y);
  if (id == kNoInstance) return std::nullopt;
  if (id >= instances.size()) throw ConsistencyError("framebuffer id does not belong to these instances");
  RecordView v;
  v.glyph = instances[id];
  v.record_index = v.glyph.record_index;
  if (v.record_index >= data.row_count()) throw ConsistencyError("instance refers to a missing record");
  for (std::size_t c = 0; c < data.column_count(); ++c) {
    v.values.emplace_back(data.column_names()[c], data.value(v.record_index, c));
  }
  return v;
}

}  // namespace glyphscape
