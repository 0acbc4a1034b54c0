// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

#include "glyphscape/error.hpp"
#include "json.hpp"

namespace glyphscape {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ParameterError("mapping." + field + ": " + msg);
}

void check_keys(const json& j, const std::string& field, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; })) {
      fail(field, "unknown key '" + it.key() + "'");
    }
  }
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "expected a finite number");
  return v;
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

AxisRef parse_axis(const json& j, const std::string& field) {
  AxisRef a;
  if (j.is_string()) {
    a.column = j.get<std::string>();
    if (a.column.empty()) fail(field, "column name is empty");
  } else if (j.is_object()) {
    check_keys(j, field, {"pca"});
    if (!j.contains("pca")) fail(field, "expected a column name or {\"pca\": i}");
    a.pca_component = get_int(j["pca"], field + ".pca");
    if (a.pca_component < 0) fail(field + ".pca", "component index must be non-negative");
  } else {
    fail(field, "expected a column name or {\"pca\": i}");
  }
  return a;
}

BinSource parse_bins(const json& j, const std::string& field) {
  BinSource b;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) b.edges.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
    try {
      set_manual_edges(b.edges);
    } catch (const ParameterError& e) {
      fail(field, e.what());
    }
    b.k = static_cast<int>(b.edges.size()) - 1;
  } else if (j.is_object()) {
    check_keys(j, field, {"k", "rebalance"});
    if (!j.contains("k")) fail(field, "expected an edge array or {\"k\": n}");
    b.k = get_int(j["k"], field + ".k");
    if (b.k < 1) fail(field + ".k", "must be at least 1");
    if (j.contains("rebalance")) b.rebalance = get_int(j["rebalance"], field + ".rebalance");
    if (b.rebalance < 0) fail(field + ".rebalance", "must be non-negative");
  } else {
    fail(field, "expected an edge array or {\"k\": n}");
  }
  return b;
}

json bins_to_json(const BinSource& b) {
  if (b.manual()) return b.edges;
  json j{{"k", b.k}};
  if (b.rebalance > 0) j["rebalance"] = b.rebalance;
  return j;
}

json axis_to_json(const AxisRef& a) {
  if (a.is_pca()) return json{{"pca", a.pca_component}};
  return a.column;
}

ArmChannel parse_arms(const json& j, const std::string& field) {
  ArmChannel a;
  a.bins.k = 4;
  if (j.is_string()) {
    a.column = j.get<std::string>();
    return a;
  }
  if (!j.is_object()) fail(field, "expected a column name or object");
  check_keys(j, field, {"column", "bins"});
  if (!j.contains("column")) fail(field, "missing 'column'");
  a.column = get_string(j["column"], field + ".column");
  if (j.contains("bins")) a.bins = parse_bins(j["bins"], field + ".bins");
  if (a.bins.k != 4) fail(field + ".bins", "arm channels need exactly 4 bins");
  return a;
}

void check_column(const Dataset& data, const std::string& name, const std::string& field) {
  if (!data.find(name)) fail(field, "unknown column '" + name + "'");
}

}  // namespace

std::string AxisRef::label() const { return is_pca() ? "PC" + std::to_string(pca_component + 1) : column; }

BinSpec BinSource::resolve(std::span<const double> values) const {
  if (manual()) return BinSpec(edges);
  const BinSpec even = even_bins(values, k);
  return rebalance > 0 ? rebalance_bins(values, even, rebalance) : even;
}

int ChannelMapping::pca_components_needed() const {
  return std::max(x.pca_component, y.pca_component) + 1;
}

void ChannelMapping::validate(const Dataset& data) const {
  for (const auto* axis : {&x, &y}) {
    const std::string field = axis == &x ? "x" : "y";
    if (!axis->is_pca()) check_column(data, axis->column, field);
  }
  if (pca_components_needed() > 0) {
    const std::size_t cols = pca.columns.empty() ? data.column_count() : pca.columns.size();
    for (const auto& c : pca.columns) check_column(data, c, "pca.columns");
    if (static_cast<std::size_t>(pca_components_needed()) > cols) {
      fail("pca", "component " + std::to_string(pca_components_needed() - 1) + " requested but only " +
                      std::to_string(cols) + " columns are analysed");
    }
  }
  check_column(data, shape.column, "shape.column");
  if (shape.bins.k < 1 || shape.bins.k > kShapeCount) fail("shape.bins", "shape channels take 1 to 6 bins");
  std::set<GlyphShape> seen(shape.order.begin(), shape.order.end());
  if (seen.size() != kShapeCount) fail("shape.order", "must be a permutation of the six shapes");
  if (!hue.column.empty()) check_column(data, hue.column, "hue.column");
  if (!hue.within_bin.empty()) {
    const auto& w = hue.within_bin;
    if (w != "shape" && w != "leftArms" && w != "rightArms") fail("hue.withinBin", "unknown channel '" + w + "'");
    if ((w == "leftArms" && left_arms.column.empty()) || (w == "rightArms" && right_arms.column.empty())) {
      fail("hue.withinBin", "channel '" + w + "' is not mapped");
    }
  }
  if (hue.range && !((*hue.range)[1] > (*hue.range)[0])) fail("hue.range", "upper bound must exceed lower bound");
  for (const auto* arms : {&left_arms, &right_arms}) {
    const std::string field = arms == &left_arms ? "leftArms" : "rightArms";
    if (arms->column.empty()) continue;
    check_column(data, arms->column, field + ".column");
    if (arms->bins.k != 4) fail(field + ".bins", "arm channels need exactly 4 bins");
  }
  if (depth_split) {
    check_column(data, depth_split->column, "depthSplit.column");
    if (!(depth_split->near_offset < depth_split->far_offset)) fail("depthSplit", "near must be less than far");
  }
  if (edge_width && edge_width->bins.k != 4) fail("edgeWidth.bins", "edge widths need exactly 4 bins");
  if (footprint_px < kMinFootprint) fail("footprint", "must be at least " + std::to_string(kMinFootprint));
  if (!(edge_alpha > 0.0 && edge_alpha < 1.0)) fail("edgeAlpha", "must lie in (0, 1)");
}

ChannelMapping parse_mapping(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("mapping is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParameterError("mapping must be a JSON object");
  check_keys(doc, "", {"x", "y", "shape", "hue", "leftArms", "rightArms", "depthSplit", "edgeWidth", "pca",
                       "footprint", "legend", "edgeAlpha"});

  ChannelMapping m;
  m.shape.order = kDefaultShapeOrder;
  m.shape.bins.k = kShapeCount;
  if (!doc.contains("x") || !doc.contains("y")) throw ParameterError("mapping needs both 'x' and 'y'");
  m.x = parse_axis(doc["x"], "x");
  m.y = parse_axis(doc["y"], "y");

  if (!doc.contains("shape")) throw ParameterError("mapping needs 'shape'");
  const json& s = doc["shape"];
  if (s.is_string()) {
    m.shape.column = s.get<std::string>();
  } else if (s.is_object()) {
    check_keys(s, "shape", {"column", "bins", "order"});
    if (!s.contains("column")) fail("shape", "missing 'column'");
    m.shape.column = get_string(s["column"], "shape.column");
    if (s.contains("bins")) m.shape.bins = parse_bins(s["bins"], "shape.bins");
    if (s.contains("order")) {
      const json& o = s["order"];
      if (!o.is_array() || o.size() != kShapeCount) fail("shape.order", "expected six shape names");
      for (std::size_t i = 0; i < kShapeCount; ++i) {
        const auto name = get_string(o[i], "shape.order");
        const auto parsed = parse_shape(name);
        if (!parsed) fail("shape.order", "unknown shape '" + name + "'");
        m.shape.order[i] = *parsed;
      }
    }
  } else {
    fail("shape", "expected a column name or object");
  }

  if (doc.contains("hue") && !doc["hue"].is_null()) {
    const json& h = doc["hue"];
    if (h.is_string()) {
      m.hue.column = h.get<std::string>();
    } else if (h.is_object()) {
      check_keys(h, "hue", {"column", "withinBin", "range", "color"});
      if (h.contains("column")) m.hue.column = get_string(h["column"], "hue.column");
      if (h.contains("withinBin")) m.hue.within_bin = get_string(h["withinBin"], "hue.withinBin");
      if (!m.hue.column.empty() && !m.hue.within_bin.empty()) fail("hue", "'column' and 'withinBin' are exclusive");
      if (h.contains("range")) {
        const json& r = h["range"];
        if (!r.is_array() || r.size() != 2) fail("hue.range", "expected [lo, hi]");
        m.hue.range = std::array<double, 2>{get_number(r[0], "hue.range"), get_number(r[1], "hue.range")};
      }
      if (h.contains("color")) {
        const json& c = h["color"];
        if (!c.is_array() || c.size() != 3) fail("hue.color", "expected [r, g, b]");
        std::array<std::uint8_t, 3> rgb{};
        for (std::size_t i = 0; i < 3; ++i) {
          const int v = get_int(c[i], "hue.color");
          if (v < 0 || v > 255) fail("hue.color", "components must be 0..255");
          rgb[i] = static_cast<std::uint8_t>(v);
        }
        m.hue.fixed = {rgb[0], rgb[1], rgb[2]};
      }
    } else {
      fail("hue", "expected a column name or object");
    }
  }

  if (doc.contains("leftArms") && !doc["leftArms"].is_null()) m.left_arms = parse_arms(doc["leftArms"], "leftArms");
  if (doc.contains("rightArms") && !doc["rightArms"].is_null()) {
    m.right_arms = parse_arms(doc["rightArms"], "rightArms");
  }

  if (doc.contains("depthSplit") && !doc["depthSplit"].is_null()) {
    const json& d = doc["depthSplit"];
    if (!d.is_object()) fail("depthSplit", "expected an object");
    check_keys(d, "depthSplit", {"column", "near", "far"});
    DepthSplit split;
    if (!d.contains("column")) fail("depthSplit", "missing 'column'");
    split.column = get_string(d["column"], "depthSplit.column");
    if (d.contains("near")) split.near_offset = get_number(d["near"], "depthSplit.near");
    if (d.contains("far")) split.far_offset = get_number(d["far"], "depthSplit.far");
    m.depth_split = split;
  }

  if (doc.contains("edgeWidth") && !doc["edgeWidth"].is_null()) {
    const json& e = doc["edgeWidth"];
    if (!e.is_object()) fail("edgeWidth", "expected an object");
    check_keys(e, "edgeWidth", {"bins"});
    EdgeWidthChannel ew;
    ew.bins.k = 4;
    if (e.contains("bins")) ew.bins = parse_bins(e["bins"], "edgeWidth.bins");
    m.edge_width = ew;
  }

  if (doc.contains("pca")) {
    const json& p = doc["pca"];
    if (!p.is_object()) fail("pca", "expected an object");
    check_keys(p, "pca", {"columns", "standardize"});
    if (p.contains("columns")) {
      if (!p["columns"].is_array()) fail("pca.columns", "expected an array of column names");
      for (const auto& c : p["columns"]) m.pca.columns.push_back(get_string(c, "pca.columns"));
    }
    if (p.contains("standardize")) {
      if (!p["standardize"].is_boolean()) fail("pca.standardize", "expected a boolean");
      m.pca.standardize = p["standardize"].get<bool>();
    }
  }

  if (doc.contains("footprint")) m.footprint_px = get_int(doc["footprint"], "footprint");
  if (doc.contains("legend")) {
    if (!doc["legend"].is_boolean()) fail("legend", "expected a boolean");
    m.legend = doc["legend"].get<bool>();
  }
  if (doc.contains("edgeAlpha")) m.edge_alpha = get_number(doc["edgeAlpha"], "edgeAlpha");
  return m;
}

ChannelMapping load_mapping(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot open mapping " + path);
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_mapping(text);
}

std::string mapping_to_json(const ChannelMapping& m) {
  json doc;
  doc["x"] = axis_to_json(m.x);
  doc["y"] = axis_to_json(m.y);
  json order = json::array();
  for (auto s : m.shape.order) order.push_back(std::string(shape_name(s)));
  doc["shape"] = {{"column", m.shape.column}, {"bins", bins_to_json(m.shape.bins)}, {"order", order}};
  if (m.hue.mapped()) {
    json h;
    if (!m.hue.column.empty()) h["column"] = m.hue.column;
    if (!m.hue.within_bin.empty()) h["withinBin"] = m.hue.within_bin;
    if (m.hue.range) h["range"] = {(*m.hue.range)[0], (*m.hue.range)[1]};
    doc["hue"] = h;
  } else {
    doc["hue"] = {{"color", {m.hue.fixed.r, m.hue.fixed.g, m.hue.fixed.b}}};
  }
  for (const auto* arms : {&m.left_arms, &m.right_arms}) {
    if (arms->column.empty()) continue;
    doc[arms == &m.left_arms ? "leftArms" : "rightArms"] = {{"column", arms->column},
                                                            {"bins", bins_to_json(arms->bins)}};
  }
  if (m.depth_split) {
    doc["depthSplit"] = {
        {"column", m.depth_split->column}, {"near", m.depth_split->near_offset}, {"far", m.depth_split->far_offset}};
  }
  if (m.edge_width) doc["edgeWidth"] = {{"bins", bins_to_json(m.edge_width->bins)}};
  doc["pca"] = {{"columns", m.pca.columns}, {"standardize", m.pca.standardize}};
  doc["footprint"] = m.footprint_px;
  doc["legend"] = m.legend;
  doc["edgeAlpha"] = m.edge_alpha;
  return doc.dump(2);
}

Rgb8 hsv_to_rgb(double hue_deg, double saturation, double value) {
  const double h = std::fmod(std::fmod(hue_deg, 360.0) + 360.0, 360.0) / 60.0;
  const double c = value * saturation;
  const double x = c * (1.0 - std::abs(std::fmod(h, 2.0) - 1.0));
  const double m = value - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  auto q = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  return {q(r + m), q(g + m), q(b + m)};
}

Rgb8 colormap(double t) {
  t = std::isfinite(t) ? std::clamp(t, 0.0, 1.0) : 0.0;
  return hsv_to_rgb(240.0 * (1.0 - t), 0.75, 0.9);
}

}  // namespace glyphscape
