// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/service.hpp"

#include <cmath>

#include "glyphscape/image_io.hpp"
#include "httplib.h"
#include "json.hpp"

namespace glyphscape {

using nlohmann::json;

namespace {

constexpr int kMaxViewSide = 4096;

// Parameters the client got wrong; reported as 400.
std::optional<double> query_number(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  const auto v = parse_number(req.get_param_value(key));
  if (!v) throw ParameterError(std::string("query parameter '") + key + "' is not a number");
  return v;
}

int query_int(const httplib::Request& req, const char* key, int fallback, int lo, int hi) {
  const auto v = query_number(req, key);
  if (!v) return fallback;
  if (*v != std::floor(*v) || *v < lo || *v > hi) {
    throw ParameterError(std::string("query parameter '") + key + "' must be an integer in [" + std::to_string(lo) +
                         ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(*v);
}

ViewRequest parse_view(const httplib::Request& req) {
  ViewRequest v;
  v.width = query_int(req, "w", v.width, 64, kMaxViewSide);
  v.height = query_int(req, "h", v.height, 64, kMaxViewSide);
  const auto fx = query_number(req, "fx");
  const auto fy = query_number(req, "fy");
  const auto r = query_number(req, "r");
  const auto d = query_number(req, "d");
  if (d && *d > 0.0) {
    if (!fx || !fy) throw ParameterError("lens needs fx and fy");
    v.lens.focus = {*fx, *fy};
    if (r) v.lens.radius_px = *r;
    v.lens.magnification = *d;
  } else if (d && *d < 0.0) {
    throw ParameterError("lens magnification must be non-negative");
  }
  v.lens.validate();
  return v;
}

std::optional<std::uint64_t> if_match(const httplib::Request& req, const json* body) {
  if (body && body->contains("revision")) {
    const json& r = (*body)["revision"];
    if (!r.is_number_unsigned()) throw ParameterError("'revision' must be a non-negative integer");
    return r.get<std::uint64_t>();
  }
  if (req.has_header("If-Match")) {
    std::string h = req.get_header_value("If-Match");
    if (h.size() >= 2 && h.front() == '"' && h.back() == '"') h = h.substr(1, h.size() - 2);
    const auto v = parse_number(h);
    if (!v || *v < 0 || *v != std::floor(*v)) throw ParameterError("If-Match must carry a revision number");
    return static_cast<std::uint64_t>(*v);
  }
  return std::nullopt;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const StaleRevisionError& e) {
    send_json(res, 409, {{"error", e.what()}, {"revision", e.current()}});
  } catch (const BindError& e) {
    send_json(res, 422, {{"error", e.what()}, {"row", e.row()}, {"channel", e.channel()}});
  } catch (const DomainError& e) {
    send_json(res, 422, {{"error", e.what()}, {"row", e.row()}});
  } catch (const ParameterError& e) {
    send_json(res, 400, {{"error", e.what()}});
  } catch (const json::exception& e) {
    send_json(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
  } catch (const std::exception& e) {
    send_json(res, 500, {{"error", e.what()}});
  }
}

}  // namespace

Session::Session(Dataset data, ChannelMapping mapping, std::shared_ptr<const SpriteAtlas> atlas,
                 std::vector<RawEdge> edges, Light light)
    : light_(light), data_(std::make_shared<const Dataset>(std::move(data))), raw_edges_(std::move(edges)) {
  light_.validate();
  if (atlas) {
    if (!(atlas->light == LightFingerprint::of(light_))) {
      throw ConsistencyError("atlas was baked under a different light");
    }
    atlases_[atlas->footprint_px] = std::move(atlas);
  }
  current_ = rebuild(std::move(mapping), 0);
}

std::shared_ptr<const SpriteAtlas> Session::atlas_for(int footprint) {
  auto it = atlases_.find(footprint);
  if (it != atlases_.end()) return it->second;
  auto atlas = std::make_shared<const SpriteAtlas>(bake_atlas(footprint, light_));
  atlases_[footprint] = atlas;
  return atlas;
}

std::shared_ptr<const Snapshot> Session::rebuild(ChannelMapping mapping, std::uint64_t revision) {
  auto snap = std::make_shared<Snapshot>();
  snap->data = data_;
  const PcaResult* cache = nullptr;
  if (pca_cache_ && current_ && current_->mapping.pca.columns == mapping.pca.columns &&
      current_->mapping.pca.standardize == mapping.pca.standardize) {
    cache = &*pca_cache_;
  }
  snap->scene = bind(*data_, mapping, cache);
  snap->edges = bind_edges(raw_edges_, mapping, snap->scene.instances.size());
  snap->atlas = atlas_for(mapping.footprint_px);
  snap->mapping = std::move(mapping);
  snap->revision = revision;
  if (snap->scene.pca) pca_cache_ = snap->scene.pca;
  return snap;
}

std::shared_ptr<const Snapshot> Session::snapshot() const {
  std::lock_guard lock(snap_mutex_);
  return current_;
}

void Session::check_revision(std::optional<std::uint64_t> if_revision) const {
  const auto cur = snapshot()->revision;
  if (if_revision && *if_revision != cur) {
    throw StaleRevisionError("revision " + std::to_string(*if_revision) + " is stale (current " +
                                 std::to_string(cur) + ")",
                             cur);
  }
}

std::uint64_t Session::set_bins(const std::string& channel, std::vector<double> edges,
                                std::optional<std::uint64_t> if_revision) {
  std::lock_guard write(write_mutex_);
  check_revision(if_revision);
  const auto snap = snapshot();
  ChannelMapping m = snap->mapping;
  const BinSpec spec = set_manual_edges(std::move(edges));
  BinSource src;
  src.edges = spec.edges();
  src.k = spec.k();
  if (channel == "shape") {
    if (spec.k() > kShapeCount) throw ParameterError("shape channels take 1 to 6 bins");
    m.shape.bins = src;
  } else if (channel == "leftArms" || channel == "rightArms") {
    auto& arms = channel == "leftArms" ? m.left_arms : m.right_arms;
    if (arms.column.empty()) throw ParameterError("channel '" + channel + "' is not mapped");
    if (spec.k() != 4) throw ParameterError("arm channels need exactly 4 bins");
    arms.bins = src;
  } else if (channel == "edgeWidth") {
    if (spec.k() != 4) throw ParameterError("edge widths need exactly 4 bins");
    m.edge_width = EdgeWidthChannel{src};
  } else {
    throw ParameterError("unknown channel '" + channel + "'");
  }
  auto next = rebuild(std::move(m), snap->revision + 1);
  std::lock_guard lock(snap_mutex_);
  current_ = next;
  return next->revision;
}

std::uint64_t Session::set_mapping(ChannelMapping mapping, std::optional<std::uint64_t> if_revision) {
  std::lock_guard write(write_mutex_);
  check_revision(if_revision);
  const auto rev = snapshot()->revision + 1;
  auto next = rebuild(std::move(mapping), rev);
  std::lock_guard lock(snap_mutex_);
  current_ = next;
  return rev;
}

Framebuffer Session::render(const Snapshot& snap, const ViewRequest& view) const {
  PlotFrame frame;
  frame.width = view.width;
  frame.height = view.height;
  frame.footprint_px = snap.mapping.footprint_px;
  frame.legend = snap.mapping.legend;
  return render_plot(snap.scene.instances, snap.edges, frame, light_, view.lens, RenderPath::kSprite,
                     snap.atlas.get(), &snap.scene.legend);
}

std::string Session::meta_json() const {
  const auto snap = snapshot();
  json j;
  j["revision"] = snap->revision;
  j["rows"] = snap->data->row_count();
  j["columns"] = snap->data->column_names();
  j["mapping"] = json::parse(mapping_to_json(snap->mapping));
  json bins = json::object();
  for (const auto& [channel, spec] : snap->scene.bins) bins[channel] = spec.edges();
  j["bins"] = bins;
  j["legend"] = json::parse(snap->scene.legend.to_json());
  j["edges"] = snap->edges.edges.size();
  return j.dump();
}

std::string Session::histogram_json(const std::string& column, int k) const {
  const auto snap = snapshot();
  const auto& values = snap->data->column(column);
  const BinSpec spec = even_bins(values, k);
  const auto counts = bin_counts(values, spec);
  return json{{"column", column}, {"edges", spec.edges()}, {"counts", counts}, {"revision", snap->revision}}.dump();
}

void install_routes(httplib::Server& server, Session& session) {
  server.Get("/api/meta", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { res.set_content(session.meta_json(), "application/json"); });
  });

  server.Get("/api/render", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto view = parse_view(req);
      const auto snap = session.snapshot();
      const auto png = encode_png(session.render(*snap, view));
      res.set_header("X-Revision", std::to_string(snap->revision));
      res.set_content(std::string(png.begin(), png.end()), "image/png");
    });
  });

  server.Get("/api/pick", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto view = parse_view(req);
      const int x = query_int(req, "x", -1, 0, view.width - 1);
      const int y = query_int(req, "y", -1, 0, view.height - 1);
      if (x < 0 || y < 0) throw ParameterError("pick needs x and y");
      const auto snap = session.snapshot();
      const auto fb = session.render(*snap, view);
      const auto rec = probe(fb, x, y, snap->scene.instances, *snap->data);
      json body{{"revision", snap->revision}, {"record", nullptr}};
      if (rec) body["record"] = json::parse(rec->to_json());
      res.set_header("X-Revision", std::to_string(snap->revision));
      send_json(res, 200, body);
    });
  });

  server.Get("/api/histogram", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.has_param("column")) throw ParameterError("histogram needs 'column'");
      const int k = query_int(req, "k", 20, 1, 1000);
      res.set_content(session.histogram_json(req.get_param_value("column"), k), "application/json");
    });
  });

  server.Put("/api/bins", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = json::parse(req.body);
      if (!body.is_object() || !body.contains("channel") || !body.contains("edges")) {
        throw ParameterError("body needs 'channel' and 'edges'");
      }
      if (!body["channel"].is_string() || !body["edges"].is_array()) {
        throw ParameterError("'channel' must be a string and 'edges' an array");
      }
      std::vector<double> edges;
      for (const auto& e : body["edges"]) {
        if (!e.is_number()) throw ParameterError("edges must be numbers");
        edges.push_back(e.get<double>());
      }
      const auto rev = session.set_bins(body["channel"].get<std::string>(), std::move(edges), if_match(req, &body));
      send_json(res, 200, {{"revision", rev}});
    });
  });

  server.Put("/api/mapping", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto mapping = parse_mapping(req.body);
      const auto rev = session.set_mapping(std::move(mapping), if_match(req, nullptr));
      send_json(res, 200, {{"revision", rev}});
    });
  });
}

void serve(Session& session, const std::string& host, int port) {
  httplib::Server server;
  install_routes(server, session);
  if (!server.listen(host, port)) throw ParameterError("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace glyphscape
