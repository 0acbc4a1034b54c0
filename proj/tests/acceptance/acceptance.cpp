// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.
//
//   acceptance <path-to-glyphscape-cli> <scratch-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "glyphscape/binning.hpp"
#include "glyphscape/glyphs.hpp"
#include "glyphscape/image_io.hpp"
#include "glyphscape/occlusion.hpp"
#include "glyphscape/pca.hpp"
#include "glyphscape/scene.hpp"
#include "glyphscape/sprites.hpp"
#include "glyphscape/synthetic.hpp"
#include "support.hpp"

using namespace glyphscape;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failure notes; the first few are kept for the report line.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass_ = false;
    if (++failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { info_ += (info_.empty() ? "" : ", ") + s; }
  Outcome outcome() const {
    std::string d = info_;
    if (!pass_) d += (d.empty() ? "" : " | ") + std::to_string(failures_) + " failure(s): " + notes_;
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::string notes_;
  std::string info_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const OcclusionResult& headline_matrix(double* elapsed = nullptr) {
  static double secs = 0.0;
  static const OcclusionResult r = [] {
    const auto t0 = std::chrono::steady_clock::now();
    OcclusionConfig c;
    c.overlap = 0.95;
    c.render_size = 512;
    auto out = run_matrix(c);
    secs = seconds_since(t0);
    return out;
  }();
  if (elapsed) *elapsed = secs;
  return r;
}

Outcome criterion1() {
  Check c;
  double secs = 0.0;
  const auto& r = headline_matrix(&secs);
  const double mean = r.diagonal_mean();
  c.note("diagonal mean " + fmt("%.2f%%", 100 * mean));
  c.note(fmt("%.1f s", secs));
  c.expect(mean >= 0.02 && mean <= 0.12, "diagonal mean outside [2%, 12%]");
  for (std::size_t i = 0; i < kShapeCount; ++i) {
    const double v = r.matrix[i][i];
    c.expect(v >= 0.01 && v <= 0.15, std::string(shape_name(kAllShapes[i])) + " diagonal " + fmt("%.3f", v));
  }
  c.expect(secs < 30.0, "matrix took " + fmt("%.1f s", secs));
  return c.outcome();
}

Outcome criterion2() {
  Check c;
  const double mean = headline_matrix().off_diagonal_mean();
  c.note("off-diagonal mean " + fmt("%.2f%%", 100 * mean));
  c.expect(mean >= 0.40 && mean <= 0.70, "off-diagonal mean outside [40%, 70%]");
  return c.outcome();
}

Outcome criterion3() {
  Check c;
  const auto& r = headline_matrix();
  int row_violations = 0;
  for (std::size_t i = 0; i < kShapeCount; ++i) {
    for (std::size_t j = 0; j < kShapeCount; ++j) {
      if (i != j && r.matrix[i][i] > r.matrix[i][j]) {
        ++row_violations;
        c.expect(false, std::string(shape_name(kAllShapes[i])) + " row: diagonal above " +
                            std::string(shape_name(kAllShapes[j])));
      }
    }
  }
  c.note("row minimum violations " + std::to_string(row_violations));

  OcclusionConfig sweep;
  sweep.render_size = 512;
  sweep.sweep = {0.5, 0.7, 0.9, 0.95};
  sweep.overlap = 0.5;
  const auto results = run_sweep(sweep);
  int non_monotone = 0;
  for (std::size_t i = 0; i < kShapeCount; ++i) {
    for (std::size_t j = 0; j < kShapeCount; ++j) {
      bool ok = true;
      for (std::size_t s = 1; s < results.size(); ++s) ok = ok && results[s].matrix[i][j] <= results[s - 1].matrix[i][j];
      if (!ok) {
        ++non_monotone;
        std::string trace;
        for (const auto& res : results) trace += fmt(" %.3f", res.matrix[i][j]);
        c.expect(false, std::string(shape_name(kAllShapes[i])) + "/" + std::string(shape_name(kAllShapes[j])) +
                            " over f:" + trace);
      }
    }
  }
  c.note("pairs non-monotone in f " + std::to_string(non_monotone) + "/36");
  return c.outcome();
}

Outcome criterion4() {
  Check c;
  const SpriteAtlas atlas = bake_atlas(32, Light::standard());
  OrthoCamera cam;
  cam.width = 960;
  cam.height = 720;
  cam.world_units_per_pixel = atlas.world_units_per_pixel();
  const auto sprites = testing::random_sprite_scene(1000, cam.width, cam.height, 2024);
  const auto direct = rasterize(testing::to_render_instances(sprites, cam), cam, Light::standard(), {1});
  c.note(std::to_string(direct.covered_pixels()) + " covered px");
  for (int workers : {1, 4, 8}) {
    const auto fb = composite(sprites, atlas, cam.width, cam.height, workers);
    c.expect(fb.bitwise_equal(direct), "composite differs from rasterize at " + std::to_string(workers) + " workers");
    const auto d = rasterize(testing::to_render_instances(sprites, cam), cam, Light::standard(), {workers});
    c.expect(d.bitwise_equal(direct), "rasterize differs at " + std::to_string(workers) + " workers");
  }
  return c.outcome();
}

Outcome criterion5() {
  Check c;
  const auto& lib = GlyphLibrary::standard();
  const auto cam = calibration_camera();
  c.expect(cam.width == 256 && cam.height == 256, "calibration camera is not 256x256");
  const double cube = static_cast<double>(silhouette_pixel_count(*lib.mesh({GlyphShape::kCube, 0, 0}), cam, 1));
  double worst = 0.0;
  for (GlyphShape s : kAllShapes) {
    const double a = static_cast<double>(silhouette_pixel_count(*lib.mesh({s, 0, 0}), cam, 1));
    const double dev = std::abs(a / cube - 1.0);
    worst = std::max(worst, dev);
    c.expect(dev <= 0.01, std::string(shape_name(s)) + " area off by " + fmt("%.2f%%", 100 * dev));
  }
  c.note("worst area deviation " + fmt("%.2f%%", 100 * worst));

  int mono = 0, prominence = 0;
  for (int key = 0; key < kSpecCount; ++key) {
    const auto spec = GlyphSpec::from_key(key);
    const auto here = silhouette_pixel_count(*lib.mesh(spec), cam, 1);
    if (spec.left_arms < kMaxArms) {
      const auto more = silhouette_pixel_count(*lib.mesh({spec.shape, spec.left_arms + 1, spec.right_arms}), cam, 1);
      ++mono;
      c.expect(more > here, "left arms not monotone at key " + std::to_string(key));
    }
    if (spec.right_arms < kMaxArms) {
      const auto more = silhouette_pixel_count(*lib.mesh({spec.shape, spec.left_arms, spec.right_arms + 1}), cam, 1);
      ++mono;
      c.expect(more > here, "right arms not monotone at key " + std::to_string(key));
    }
    if (spec.left_arms == spec.right_arms && spec.left_arms > 0) {
      // Projected arm area as seen on the glyph: pixels each side's arms win
      // against the base and the other side.
      const auto& p = lib.parts(spec);
      const std::vector<RenderInstance> inst{
          {p.base, {0, 0, 0}, kWhite, 0}, {p.left_arms, {0, 0, 0}, kWhite, 1}, {p.right_arms, {0, 0, 0}, kWhite, 2}};
      const auto fb = rasterize(inst, cam, Light::standard(), {1});
      ++prominence;
      c.expect(fb.pixels_with_id(1) >= fb.pixels_with_id(2),
               "right arms more prominent at key " + std::to_string(key));
    }
  }
  c.note(std::to_string(mono) + " monotone steps, " + std::to_string(prominence) + " prominence pairs");
  return c.outcome();
}

Outcome criterion6() {
  Check c;
  double worst_vec = 0.0, worst_rec = 0.0, worst_var = 0.0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto cols = testing::correlated_columns(200, seed);
    const Dataset d({"a", "b", "c"}, {cols[0], cols[1], cols[2]});
    const auto r = pca(d, {"a", "b", "c"}, 3);
    const auto oracle = testing::characteristic_eigen3(testing::covariance3(cols, true));
    for (std::size_t k = 0; k < 3; ++k) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 3; ++i) dot += r.components[k][i] * oracle.vectors[k][i];
      const double sign = dot < 0 ? -1.0 : 1.0;
      for (std::size_t i = 0; i < 3; ++i) {
        worst_vec = std::max(worst_vec, std::abs(r.components[k][i] - sign * oracle.vectors[k][i]));
      }
      worst_vec = std::max(worst_vec, std::abs(r.eigenvalues[k] - oracle.values[k]));
    }
    for (std::size_t row = 0; row < d.row_count(); ++row) {
      for (std::size_t col = 0; col < 3; ++col) {
        double back = 0.0;
        for (std::size_t k = 0; k < 3; ++k) back += r.scores[row][k] * r.components[k][col];
        worst_rec = std::max(worst_rec, std::abs(back - (d.value(row, col) - r.mean[col]) / r.scales[col]));
      }
    }
    for (std::size_t k = 0; k < 3; ++k) {
      const auto s = r.score_column(k);
      const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
      double ss = 0.0;
      for (double v : s) ss += (v - mean) * (v - mean);
      worst_var = std::max(worst_var, std::abs(ss / static_cast<double>(s.size() - 1) - r.eigenvalues[k]));
    }
  }
  c.note("component err " + fmt("%.1e", worst_vec));
  c.note("reconstruction err " + fmt("%.1e", worst_rec));
  c.note("variance err " + fmt("%.1e", worst_var));
  c.expect(worst_vec < 1e-8, "components differ from the oracle");
  c.expect(worst_rec < 1e-8, "reconstruction error too large");
  c.expect(worst_var < 1e-8, "score variance differs from eigenvalue");
  return c.outcome();
}

Outcome criterion7() {
  Check c;
  std::vector<double> seq(12);
  std::iota(seq.begin(), seq.end(), 0.0);
  const auto even = even_bins(seq, 4);
  c.expect(bin_counts(seq, even) == std::vector<std::size_t>{3, 3, 3, 3}, "0..11 counts are not [3,3,3,3]");
  c.expect(even.edges() == std::vector<double>{0, 2.75, 5.5, 8.25, 11}, "0..11 edges");

  std::mt19937_64 rng(77);
  int rebalance_checks = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::lognormal_distribution<double> skew(0.0, 1.0 + 0.02 * trial);
    std::vector<double> v(300 + static_cast<std::size_t>(trial) * 10);
    for (auto& x : v) x = skew(rng);
    const auto spec = even_bins(v, 4 + trial % 3);
    const auto max_of = [&](const BinSpec& s) {
      const auto counts = bin_counts(v, s);
      return *std::max_element(counts.begin(), counts.end());
    };
    std::size_t prev = max_of(spec);
    for (int it = 1; it <= 8; ++it) {
      const auto next = rebalance_bins(v, spec, it);
      const auto m = max_of(next);
      ++rebalance_checks;
      c.expect(m <= prev, "rebalance raised the maximum in trial " + std::to_string(trial));
      c.expect(next.k() == spec.k(), "rebalance changed k");
      prev = m;
    }
  }
  c.note(std::to_string(rebalance_checks) + " rebalance steps");

  long probes = 0;
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_real_distribution<double> u(-50, 50);
    std::vector<double> edges(2 + static_cast<std::size_t>(trial % 10));
    for (auto& e : edges) e = u(rng);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (edges.size() < 2) continue;
    const BinSpec spec(edges);
    std::uniform_real_distribution<double> in(spec.lower(), spec.upper());
    std::vector<double> xs(10000);
    for (auto& x : xs) x = in(rng);
    std::sort(xs.begin(), xs.end());
    int prev = spec.bin_of(spec.lower());
    for (double x : xs) {
      const int b = spec.bin_of(x);
      c.expect(b >= prev, "bin_of not monotone");
      prev = b;
      ++probes;
    }
    c.expect(spec.bin_of(spec.upper()) == spec.k() - 1, "upper edge not in the last bin");
  }
  c.note(std::to_string(probes) + " bin_of probes");
  return c.outcome();
}

Outcome criterion8() {
  Check c;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-400, 400);
  int outside = 0;
  for (double d : {0.5, 1.0, 3.0, 8.0}) {
    const LensParams lens{{12.5, -7.0}, 90.0, d};
    const Vec2 near_rim{lens.focus.x + lens.radius_px * (1.0 - 1e-15), lens.focus.y};
    c.expect(std::abs(lens_transform(near_rim, lens).x - lens.focus.x - lens.radius_px) / lens.radius_px < 1e-12,
             "rim continuity");
    for (int i = 0; i < 2000; ++i) {
      const Vec2 p{u(rng), u(rng)};
      if (length(p - lens.focus) >= lens.radius_px) {
        ++outside;
        c.expect(lens_transform(p, lens) == p, "moved a point outside the disk");
      }
    }
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double r = lens.radius_px * i / 1000.0;
      const double out = length(lens_transform({lens.focus.x + r * 0.6, lens.focus.y + r * 0.8}, lens) - lens.focus);
      c.expect(out > prev, "radial map not strictly increasing at d=" + fmt("%g", d));
      prev = out;
    }
  }
  const LensParams off{{0, 0}, 50.0, 0.0};
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p{u(rng) / 20, u(rng) / 20};
    c.expect(lens_transform(p, off) == p, "d = 0 moved a point");
  }
  c.note(std::to_string(outside) + " exterior probes");
  return c.outcome();
}

ChannelMapping event_mapping() {
  return parse_mapping(R"({
    "x": {"pca": 0}, "y": {"pca": 1}, "shape": "dphi", "hue": "mass",
    "leftArms": "eg1", "rightArms": "eg2",
    "pca": {"columns": ["dphi", "mass", "eg1", "eg2", "eta", "pt"]}
  })");
}

Outcome criterion9() {
  Check c;
  const Dataset data = synthetic_events(10000, 9);
  const ChannelMapping mapping = event_mapping();
  const auto scene = bind(data, mapping);
  const SpriteAtlas atlas = bake_atlas(mapping.footprint_px, Light::standard());
  PlotFrame frame;
  frame.width = 1024;
  frame.height = 1024;
  frame.footprint_px = mapping.footprint_px;
  frame.legend = mapping.legend;

  const auto render = [&](int workers, double* secs) {
    PlotFrame f = frame;
    f.workers = workers;
    const auto t0 = std::chrono::steady_clock::now();
    auto fb = render_plot(scene.instances, {}, f, Light::standard(), {}, RenderPath::kSprite, &atlas, &scene.legend);
    if (secs) *secs = seconds_since(t0);
    return fb;
  };
  double best = 1e9;
  Framebuffer first;
  for (int rep = 0; rep < 3; ++rep) {
    double s = 0.0;
    auto fb = render(0, &s);
    best = std::min(best, s);
    if (rep == 0) {
      first = std::move(fb);
    } else {
      c.expect(fb.bitwise_equal(first), "rerun differs");
    }
  }
  for (int workers : {1, 2, 4, 8}) c.expect(render(workers, nullptr).bitwise_equal(first), "differs at " + std::to_string(workers) + " workers");
  c.note(std::to_string(scene.instances.size()) + " glyphs at " + std::to_string(frame.footprint_px) + " px");
  c.note("best " + fmt("%.3f s", best));
  c.expect(best < 2.0, "render took " + fmt("%.2f s", best));
  return c.outcome();
}

Outcome criterion10(const std::string& cli, const fs::path& dir) {
  Check c;
  fs::create_directories(dir);
  const auto csv = dir / "events.csv";
  const auto mapping_path = dir / "mapping.json";
  const auto png = dir / "plot.png";
  {
    std::ofstream f(csv);
    write_csv(f, synthetic_events(2000, 10));
    std::ofstream m(mapping_path);
    m << R"({"x": {"pca": 0}, "y": {"pca": 1},
             "shape": {"column": "dphi", "bins": {"k": 6}},
             "hue": "mass",
             "leftArms": {"column": "eg1", "bins": {"k": 4}},
             "rightArms": {"column": "eg2", "bins": {"k": 4}},
             "pca": {"columns": ["dphi", "mass", "eg1", "eg2", "eta", "pt"]},
             "footprint": 32})";
  }
  fs::remove(png);
  const std::string cmd = "\"" + cli + "\" plot --data \"" + csv.string() + "\" --mapping \"" + mapping_path.string() +
                          "\" --out \"" + png.string() + "\" --width 768 --height 768 > \"" +
                          (dir / "plot.log").string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  c.expect(rc == 0, "plot exited with " + std::to_string(rc));
  if (fs::exists(png)) {
    std::ifstream f(png, std::ios::binary);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    int w = 0, h = 0;
    const auto px = decode_png(bytes, w, h);
    c.expect(w == 768 && h == 768, "PNG has the wrong size");
    c.note("PNG " + std::to_string(bytes.size()) + " bytes");
  } else {
    c.expect(false, "no PNG written");
  }

  // The same pipeline in process for the buffer-level invariants.
  const auto load = load_csv(csv.string());
  const auto mapping = load_mapping(mapping_path.string());
  const auto scene = bind(load.data, mapping);
  c.expect(scene.bins.at("shape").k() == 6, "shape bins");
  c.expect(scene.bins.at("leftArms").k() == 4 && scene.bins.at("rightArms").k() == 4, "arm bins");
  const SpriteAtlas atlas = bake_atlas(mapping.footprint_px, Light::standard());
  PlotFrame frame;
  frame.width = 768;
  frame.height = 768;
  frame.footprint_px = mapping.footprint_px;
  const auto colored =
      render_plot(scene.instances, {}, frame, Light::standard(), {}, RenderPath::kSprite, &atlas, &scene.legend);
  auto gray = scene.instances;
  for (auto& g : gray) {
    const auto l = static_cast<std::uint8_t>(std::lround(0.299 * g.hue.r + 0.587 * g.hue.g + 0.114 * g.hue.b));
    g.hue = {l, l, l};
  }
  const auto grayed =
      render_plot(gray, {}, frame, Light::standard(), {}, RenderPath::kSprite, &atlas, &scene.legend);
  c.expect(colored.id == grayed.id, "grayscale changed the id buffer");
  std::size_t mask_diff = 0;
  for (std::size_t i = 0; i < colored.id.size(); ++i) {
    mask_diff += (colored.id[i] == kNoInstance) != (grayed.id[i] == kNoInstance);
  }
  c.expect(mask_diff == 0, "grayscale changed the glyph mask");

  frame.legend = false;
  auto split_mapping = mapping;
  split_mapping.depth_split = DepthSplit{"signal", -2.0, 2.0};
  const auto split = bind(load.data, split_mapping);
  const auto all = render_plot(split.instances, {}, frame, Light::standard(), {}, RenderPath::kSprite, &atlas);
  const auto layout = make_layout(split.instances, frame);
  const auto px = glyph_pixels(split.instances, layout, {});
  std::vector<SpriteInstance> sig, bg;
  for (std::size_t i = 0; i < split.instances.size(); ++i) {
    const auto& g = split.instances[i];
    SpriteInstance s{g.spec, px[i][0], px[i][1], static_cast<float>(g.z_offset), g.hue, static_cast<std::uint32_t>(i)};
    (g.z_offset < 0 ? sig : bg).push_back(s);
  }
  const auto sfb = composite(sig, atlas, frame.width, frame.height);
  const auto bfb = composite(bg, atlas, frame.width, frame.height);
  std::size_t contested = 0, lost = 0;
  for (std::size_t i = 0; i < all.id.size(); ++i) {
    if (sfb.id[i] == kNoInstance || bfb.id[i] == kNoInstance) continue;
    ++contested;
    if (all.id[i] == kNoInstance || !(split.instances[all.id[i]].z_offset < 0)) ++lost;
  }
  c.note(std::to_string(contested) + " contested px");
  c.expect(contested > 0, "no contested pixels");
  c.expect(lost == 0, std::to_string(lost) + " contested pixels not won by signal");
  return c.outcome();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <glyphscape-cli> <scratch-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path dir = argv[2];

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "occlusion diagonal", criterion1},
      {2, "occlusion off-diagonal", criterion2},
      {3, "occlusion structure", criterion3},
      {4, "sprite equivalence", criterion4},
      {5, "size normalization and arm invariants", criterion5},
      {6, "PCA oracle", criterion6},
      {7, "binning", criterion7},
      {8, "lens", criterion8},
      {9, "dense-plot determinism and scale", criterion9},
      {10, "end-to-end pipeline", [&] { return criterion10(cli, dir / "pipeline"); }},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", cr.id, cr.name, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
