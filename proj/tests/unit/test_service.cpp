// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <thread>

#include "doctest.h"
#include "glyphscape/image_io.hpp"
#include "glyphscape/service.hpp"
#include "glyphscape/synthetic.hpp"
#include "httplib.h"
#include "json.hpp"

using namespace glyphscape;
using nlohmann::json;

namespace {

ChannelMapping mapping() {
  auto m = parse_mapping(R"({
    "x": "eta", "y": "pt", "shape": "dphi", "hue": "mass",
    "leftArms": "eg1", "rightArms": "eg2", "footprint": 24, "legend": false
  })");
  return m;
}

// A server on an ephemeral port for the lifetime of the fixture.
struct LiveServer {
  Session session;
  httplib::Server server;
  std::thread thread;
  int port = 0;

  LiveServer() : session(synthetic_events(150, 21), mapping()) {
    install_routes(server, session);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LiveServer() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(60, 0);
    return c;
  }
};

LiveServer& live() {
  static LiveServer s;
  return s;
}

json body_of(const httplib::Result& r) {
  REQUIRE(r);
  return json::parse(r->body);
}

// Pixel at the center of the first record's glyph when the whole plot is
// rendered at 400x400.
std::array<int, 2> center_of(const Snapshot& snap, std::size_t record) {
  PlotFrame f;
  f.width = 400;
  f.height = 400;
  f.footprint_px = snap.mapping.footprint_px;
  f.legend = snap.mapping.legend;
  const auto layout = make_layout(snap.scene.instances, f);
  return glyph_pixels(snap.scene.instances, layout, {})[record];
}

}  // namespace

TEST_CASE("meta describes the session") {
  auto c = live().client();
  const auto meta = body_of(c.Get("/api/meta"));
  CHECK(meta["rows"] == 150);
  CHECK(meta["columns"].size() == 7);
  CHECK(meta["mapping"]["x"] == "eta");
  CHECK(meta["bins"]["leftArms"].size() == 5);
  CHECK(meta["legend"]["shapes"].size() == 6);
}

TEST_CASE("identical render queries return identical PNGs") {
  auto c = live().client();
  const auto a = c.Get("/api/render?w=300&h=240");
  const auto b = c.Get("/api/render?w=300&h=240");
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->status == 200);
  CHECK(a->get_header_value("Content-Type") == "image/png");
  CHECK(a->body == b->body);
  int w = 0, h = 0;
  const auto px = decode_png(std::vector<std::uint8_t>(a->body.begin(), a->body.end()), w, h);
  CHECK(w == 300);
  CHECK(h == 240);
  CHECK(px.size() == 300u * 240u);
  const auto lensed = c.Get("/api/render?w=300&h=240&fx=150&fy=120&r=80&d=3");
  REQUIRE(lensed);
  CHECK(lensed->status == 200);
  CHECK(lensed->body != a->body);
}

TEST_CASE("bad requests are 400") {
  auto c = live().client();
  CHECK(c.Get("/api/render?w=10")->status == 400);
  CHECK(c.Get("/api/render?w=abc")->status == 400);
  CHECK(c.Get("/api/render?d=2")->status == 400);
  CHECK(c.Get("/api/pick?x=5")->status == 400);
  CHECK(c.Get("/api/histogram")->status == 400);
  CHECK(c.Get("/api/histogram?column=nope")->status == 400);
  const auto rev = live().session.revision();
  const auto r = c.Put("/api/bins", R"({"channel": "leftArms", "edges": [0, 2, 1, 3, 4]})", "application/json");
  REQUIRE(r);
  CHECK(r->status == 400);
  CHECK(body_of(r)["error"].get<std::string>().find("increasing") != std::string::npos);
  CHECK(c.Put("/api/bins", "{not json", "application/json")->status == 400);
  CHECK(c.Put("/api/bins", R"({"channel": "hue", "edges": [0, 1]})", "application/json")->status == 400);
  CHECK(c.Put("/api/mapping", R"({"x": "eta"})", "application/json")->status == 400);
  CHECK(live().session.revision() == rev);
}

TEST_CASE("histogram") {
  auto c = live().client();
  const auto h = body_of(c.Get("/api/histogram?column=mass&k=5"));
  CHECK(h["edges"].size() == 6);
  std::size_t total = 0;
  for (const auto& n : h["counts"]) total += n.get<std::size_t>();
  CHECK(total == 150);
  CHECK(body_of(c.Get("/api/histogram?column=mass"))["counts"].size() == 20);
}

TEST_CASE("bin edits bump the revision and show up in picks") {
  auto& srv = live();
  auto c = srv.client();
  const auto before = srv.session.snapshot();
  const auto eg1 = before->data->column("eg1");
  const double lo = *std::min_element(eg1.begin(), eg1.end());
  const double hi = *std::max_element(eg1.begin(), eg1.end());

  // Find a record whose glyph center is visible in the pick render.
  std::size_t record = 0;
  std::array<int, 2> pos{};
  json picked;
  for (; record < before->scene.instances.size(); ++record) {
    pos = center_of(*before, record);
    if (pos[0] < 0 || pos[1] < 0 || pos[0] >= 400 || pos[1] >= 400) continue;
    picked = body_of(c.Get(("/api/pick?w=400&h=400&x=" + std::to_string(pos[0]) + "&y=" + std::to_string(pos[1]))));
    if (!picked["record"].is_null() && picked["record"]["record"] == record) break;
  }
  REQUIRE(record < before->scene.instances.size());
  const int old_arms = picked["record"]["glyph"]["leftArms"];

  // Edges that push this record's eg1 value into the top bin, then the bottom.
  const double v = eg1[record];
  const double span = hi - lo;
  const std::vector<double> top{lo, lo + 1e-9 * span, lo + 2e-9 * span, std::min(v, hi) - 1e-9 * span, hi};
  const std::vector<double> bottom{lo, std::max(v, lo) + 1e-9 * span, hi - 2e-9 * span, hi - 1e-9 * span, hi};
  const auto& edges = old_arms == 3 ? bottom : top;
  const int expect = old_arms == 3 ? 0 : 3;
  const auto put = c.Put("/api/bins", json{{"channel", "leftArms"}, {"edges", edges}}.dump(), "application/json");
  REQUIRE(put);
  CHECK(put->status == 200);
  const auto rev = body_of(put)["revision"].get<std::uint64_t>();
  CHECK(rev == before->revision + 1);

  const auto after = body_of(
      c.Get(("/api/pick?w=400&h=400&x=" + std::to_string(pos[0]) + "&y=" + std::to_string(pos[1]))));
  CHECK(after["revision"] == rev);
  REQUIRE_FALSE(after["record"].is_null());
  CHECK(after["record"]["record"] == record);
  CHECK(after["record"]["glyph"]["leftArms"] == expect);
  CHECK(body_of(c.Get("/api/meta"))["bins"]["leftArms"] == json(edges));
}

TEST_CASE("stale revisions are 409") {
  auto& srv = live();
  auto c = srv.client();
  const auto rev = srv.session.revision();
  const auto ok = c.Put("/api/bins", json{{"channel", "shape"}, {"edges", {0.0, 1.0, 2.0, 3.2}}, {"revision", rev}}.dump(),
                        "application/json");
  REQUIRE(ok);
  CHECK(ok->status == 200);
  const auto stale = c.Put("/api/bins", json{{"channel", "shape"}, {"edges", {0.0, 3.2}}, {"revision", rev}}.dump(),
                           "application/json");
  REQUIRE(stale);
  CHECK(stale->status == 409);
  CHECK(body_of(stale)["revision"] == rev + 1);

  httplib::Headers hdr{{"If-Match", "\"" + std::to_string(rev) + "\""}};
  const auto text = mapping_to_json(mapping());
  CHECK(c.Put("/api/mapping", hdr, text, "application/json")->status == 409);
  httplib::Headers fresh{{"If-Match", std::to_string(rev + 1)}};
  const auto m = c.Put("/api/mapping", fresh, text, "application/json");
  REQUIRE(m);
  CHECK(m->status == 200);
  CHECK(body_of(m)["revision"] == rev + 2);
}

TEST_CASE("values outside manual edges are 422 with the row") {
  auto& srv = live();
  auto c = srv.client();
  const auto snap = srv.session.snapshot();
  const auto& mass = snap->data->column("eg2");
  const double lo = *std::min_element(mass.begin(), mass.end());
  const double cut = *std::max_element(mass.begin(), mass.end()) - 1e-6;
  const auto rev = srv.session.revision();
  // Edges stop just short of the largest value; the first row above the cut
  // is the one reported.
  std::size_t first = 0;
  while (!(mass[first] > cut)) ++first;
  const std::vector<double> edges{lo, lo + (cut - lo) / 4, lo + (cut - lo) / 2, lo + 3 * (cut - lo) / 4, cut};
  const auto r = c.Put("/api/bins", json{{"channel", "rightArms"}, {"edges", edges}}.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 422);
  const auto body = body_of(r);
  CHECK(body["row"] == first);
  CHECK(body["channel"] == "rightArms");
  CHECK(srv.session.revision() == rev);
}

TEST_CASE("session rejects an atlas baked under another light") {
  Light other;
  other.ambient = 0.4;
  other.diffuse = 0.6;
  auto atlas = std::make_shared<const SpriteAtlas>(bake_atlas(16, other));
  CHECK_THROWS_AS(Session(synthetic_events(10), mapping(), atlas), ConsistencyError);
}
