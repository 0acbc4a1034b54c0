// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/cli.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "glyphscape/binning.hpp"
#include "glyphscape/error.hpp"
#include "glyphscape/glyphs.hpp"
#include "glyphscape/image_io.hpp"
#include "glyphscape/occlusion.hpp"
#include "glyphscape/pca.hpp"
#include "glyphscape/scene.hpp"
#include "glyphscape/service.hpp"
#include "glyphscape/sprites.hpp"
#include "glyphscape/synthetic.hpp"

namespace glyphscape {

namespace {

std::vector<double> split_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto v = parse_number(cell);
    if (!v) throw ParameterError(std::string(what) + ": '" + cell + "' is not a number");
    out.push_back(*v);
  }
  if (out.empty()) throw ParameterError(std::string(what) + " is empty");
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty()) out.push_back(cell);
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write " + path);
  return f;
}

LensParams parse_lens(const std::string& text) {
  LensParams lens;
  if (text.empty()) return lens;
  const auto v = split_numbers(text, "--lens");
  if (v.size() != 4) throw ParameterError("--lens expects fx,fy,r,d");
  lens.focus = {v[0], v[1]};
  lens.radius_px = v[2];
  lens.magnification = v[3];
  lens.validate();
  return lens;
}

struct Options {
  std::string out, data, mapping, sprites, edges, column, columns, sheet, lens, overlap = "0.95", host = "127.0.0.1";
  std::string shape = "Sphere";
  int size = 0, width = 1024, height = 1024, k = 4, rebalance = 0, components = 2, port = 8080, workers = 0;
  int resolution = kDefaultResolution, left = 0, right = 0, rows = 10000;
  std::uint64_t seed = 7;
  bool direct = false, raw = false, outliers = false;
};

void cmd_bake(const Options& o, std::ostream& out) {
  if (o.resolution != kDefaultResolution) {
    const GlyphLibrary lib(o.resolution);
    save_atlas(bake_atlas(o.size, Light::standard(), lib, o.workers), o.out);
  } else {
    save_atlas(bake_atlas(o.size, Light::standard(), GlyphLibrary::standard(), o.workers), o.out);
  }
  out << "wrote " << kSpecCount << " sprites at " << o.size << " px to " << o.out << '\n';
}

void cmd_plot(const Options& o, std::ostream& out, std::ostream& err) {
  ChannelMapping mapping = load_mapping(o.mapping);
  const auto csv = load_csv(o.data);
  if (csv.dropped_rows > 0) err << "dropped " << csv.dropped_rows << " rows with missing or non-numeric cells\n";
  std::shared_ptr<const SpriteAtlas> atlas;
  if (!o.sprites.empty()) {
    atlas = std::make_shared<const SpriteAtlas>(load_atlas(o.sprites));
    if (atlas->footprint_px != mapping.footprint_px) {
      err << "using the atlas footprint of " << atlas->footprint_px << " px\n";
      mapping.footprint_px = atlas->footprint_px;
    }
  }
  const BoundScene scene = bind(csv.data, mapping);
  EdgeSet edges;
  edges.alpha = mapping.edge_alpha;
  if (!o.edges.empty()) edges = bind_edges(load_edges_csv(o.edges), mapping, scene.instances.size());

  PlotFrame frame;
  frame.width = o.width;
  frame.height = o.height;
  frame.footprint_px = mapping.footprint_px;
  frame.legend = mapping.legend;
  frame.workers = o.workers;
  const Light light = Light::standard();
  const RenderPath path = o.direct ? RenderPath::kDirect : RenderPath::kSprite;
  if (path == RenderPath::kSprite && !atlas) {
    atlas = std::make_shared<const SpriteAtlas>(bake_atlas(frame.footprint_px, light, GlyphLibrary::standard(),
                                                           o.workers));
  }
  const auto start = std::chrono::steady_clock::now();
  const Framebuffer fb =
      render_plot(scene.instances, edges, frame, light, parse_lens(o.lens), path, atlas.get(), &scene.legend);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  write_png(o.out, fb);
  out << "rendered " << scene.instances.size() << " glyphs at " << o.width << "x" << o.height << " in " << ms
      << " ms to " << o.out << '\n';
}

void cmd_occlusion(const Options& o, std::ostream& out) {
  OcclusionConfig config;
  config.render_size = o.size;
  config.workers = o.workers;
  config.sweep = split_numbers(o.overlap, "--overlap");
  config.overlap = config.sweep.front();
  const auto results = run_sweep(config);
  auto f = open_out(o.out);
  write_occlusion_csv(f, results);
  for (const auto& r : results) {
    out << "overlap " << r.config.overlap << ": diagonal mean " << 100.0 * r.diagonal_mean()
        << "%, off-diagonal mean " << 100.0 * r.off_diagonal_mean() << "%\n";
  }
  if (!o.sheet.empty()) {
    OcclusionConfig sheet_config = config;
    sheet_config.sweep.clear();
    write_png(o.sheet, contact_sheet(sheet_config));
  }
}

void cmd_bins(const Options& o, std::ostream& out, std::ostream& err) {
  const auto csv = load_csv(o.data);
  if (csv.dropped_rows > 0) err << "dropped " << csv.dropped_rows << " rows\n";
  const auto& values = csv.data.column(o.column);
  BinSpec spec = even_bins(values, o.k);
  if (o.rebalance > 0) spec = rebalance_bins(values, spec, o.rebalance);
  const auto counts = bin_counts(values, spec);
  std::ostream* dst = &out;
  std::ofstream f;
  if (!o.out.empty()) {
    f = open_out(o.out);
    dst = &f;
  }
  *dst << "bin,lower,upper,count\n";
  char buf[96];
  for (int b = 0; b < spec.k(); ++b) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%zu\n", b, spec.edges()[static_cast<std::size_t>(b)],
                  spec.edges()[static_cast<std::size_t>(b) + 1], counts[static_cast<std::size_t>(b)]);
    *dst << buf;
  }
}

void cmd_pca(const Options& o, std::ostream& out, std::ostream& err) {
  const auto csv = load_csv(o.data);
  if (csv.dropped_rows > 0) err << "dropped " << csv.dropped_rows << " rows\n";
  const auto cols = o.columns.empty() ? csv.data.column_names() : split_names(o.columns);
  const PcaResult result = pca(csv.data, cols, o.components, !o.raw);
  std::vector<double> ranks;
  if (o.outliers) ranks = outlier_rank(result);
  auto f = open_out(o.out);
  f << "row";
  for (std::size_t k = 0; k < result.component_count(); ++k) f << ",PC" << k + 1;
  if (o.outliers) f << ",outlier_rank";
  f << '\n';
  char buf[40];
  for (std::size_t r = 0; r < result.row_count(); ++r) {
    f << r;
    for (double s : result.scores[r]) {
      std::snprintf(buf, sizeof(buf), ",%.17g", s);
      f << buf;
    }
    if (o.outliers) {
      std::snprintf(buf, sizeof(buf), ",%g", ranks[r]);
      f << buf;
    }
    f << '\n';
  }
  out << "eigenvalues:";
  for (double l : result.eigenvalues) out << ' ' << l;
  out << '\n';
  for (std::size_t k = 0; k < result.component_count(); ++k) {
    out << "PC" << k + 1 << ':';
    for (std::size_t c = 0; c < cols.size(); ++c) out << ' ' << cols[c] << '=' << result.components[k][c];
    out << '\n';
  }
}

void cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
  ChannelMapping mapping = load_mapping(o.mapping);
  auto csv = load_csv(o.data);
  if (csv.dropped_rows > 0) err << "dropped " << csv.dropped_rows << " rows\n";
  std::shared_ptr<const SpriteAtlas> atlas;
  if (!o.sprites.empty()) {
    atlas = std::make_shared<const SpriteAtlas>(load_atlas(o.sprites));
    mapping.footprint_px = atlas->footprint_px;
  }
  std::vector<RawEdge> edges;
  if (!o.edges.empty()) edges = load_edges_csv(o.edges);
  Session session(std::move(csv.data), std::move(mapping), atlas, std::move(edges));
  out << "serving on http://" << o.host << ':' << o.port << '\n' << std::flush;
  serve(session, o.host, o.port);
}

void cmd_mesh(const Options& o, std::ostream& out) {
  const auto shape = parse_shape(o.shape);
  if (!shape) throw ParameterError("unknown shape '" + o.shape + "'");
  const GlyphSpec spec{*shape, o.left, o.right};
  spec.validate();
  auto f = open_out(o.out);
  write_obj(f, *GlyphLibrary::standard().mesh(spec));
  out << "wrote " << shape_name(spec.shape) << " with " << o.left << '/' << o.right << " arms to " << o.out << '\n';
}

void cmd_synth(const Options& o, std::ostream& out) {
  auto f = open_out(o.out);
  write_csv(f, synthetic_events(static_cast<std::size_t>(o.rows), o.seed));
  out << "wrote " << o.rows << " rows to " << o.out << '\n';
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dense multivariate scatterplots with 3D glyphs", "glyphscape"};
  app.require_subcommand(1);
  Options o;

  auto* bake = app.add_subcommand("bake", "Pre-render the 96 glyph depth sprites");
  bake->add_option("--out", o.out, "Atlas file")->required();
  bake->add_option("--size", o.size, "Pixels per world unit")->required()->check(CLI::Range(kMinFootprint, 512));
  bake->add_option("--resolution", o.resolution, "Mesh tessellation")->check(CLI::Range(kMinResolution, 256));

  auto* plot = app.add_subcommand("plot", "Render a dataset to PNG");
  plot->add_option("--data", o.data, "Input CSV")->required();
  plot->add_option("--mapping", o.mapping, "Channel mapping JSON")->required();
  plot->add_option("--out", o.out, "Output PNG")->required();
  plot->add_option("--sprites", o.sprites, "Pre-baked atlas");
  plot->add_option("--width", o.width, "Image width")->check(CLI::Range(64, 16384));
  plot->add_option("--height", o.height, "Image height")->check(CLI::Range(64, 16384));
  plot->add_option("--edges", o.edges, "Edges CSV (source, target[, length])");
  plot->add_option("--lens", o.lens, "Magnification lens fx,fy,r,d");
  plot->add_flag("--direct", o.direct, "Rasterize geometry instead of compositing sprites");

  auto* occ = app.add_subcommand("occlusion", "Run the glyph occlusion test");
  occ->add_option("--overlap", o.overlap, "Overlap fraction(s), comma separated")->required();
  occ->add_option("--size", o.size, "Render size")->required()->check(CLI::Range(128, 8192));
  occ->add_option("--out", o.out, "Output CSV")->required();
  occ->add_option("--sheet", o.sheet, "Contact sheet PNG (first overlap)");

  auto* bins = app.add_subcommand("bins", "Bin one column");
  bins->add_option("--data", o.data, "Input CSV")->required();
  bins->add_option("--column", o.column, "Column name")->required();
  bins->add_option("--k", o.k, "Bin count")->required()->check(CLI::Range(1, 10000));
  bins->add_option("--rebalance", o.rebalance, "Rebalancing iterations")->check(CLI::NonNegativeNumber);
  bins->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* pc = app.add_subcommand("pca", "Principal component scores");
  pc->add_option("--data", o.data, "Input CSV")->required();
  pc->add_option("--columns", o.columns, "Columns, comma separated (default all)");
  pc->add_option("--components", o.components, "Components to keep")->check(CLI::PositiveNumber);
  pc->add_option("--out", o.out, "Output CSV")->required();
  pc->add_flag("--raw", o.raw, "Do not standardize columns");
  pc->add_flag("--outliers", o.outliers, "Append the outlier rank");

  auto* serve_cmd = app.add_subcommand("serve", "HTTP service for the viewer");
  serve_cmd->add_option("--data", o.data, "Input CSV")->required();
  serve_cmd->add_option("--mapping", o.mapping, "Channel mapping JSON")->required();
  serve_cmd->add_option("--port", o.port, "TCP port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", o.host, "Bind address");
  serve_cmd->add_option("--sprites", o.sprites, "Pre-baked atlas");
  serve_cmd->add_option("--edges", o.edges, "Edges CSV");

  auto* mesh = app.add_subcommand("mesh", "Export one glyph as OBJ");
  mesh->add_option("--shape", o.shape, "Shape name");
  mesh->add_option("--left", o.left, "Left arms")->check(CLI::Range(0, kMaxArms));
  mesh->add_option("--right", o.right, "Right arms")->check(CLI::Range(0, kMaxArms));
  mesh->add_option("--out", o.out, "Output OBJ")->required();

  auto* synth = app.add_subcommand("synth", "Write a synthetic event table");
  synth->add_option("--rows", o.rows, "Row count")->check(CLI::Range(1, 10000000));
  synth->add_option("--seed", o.seed, "PRNG seed");
  synth->add_option("--out", o.out, "Output CSV")->required();

  for (auto* sub : {bake, plot, occ, serve_cmd}) {
    sub->add_option("--workers", o.workers, "Worker threads (0 = auto)")->check(CLI::NonNegativeNumber);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*bake) cmd_bake(o, out);
    if (*plot) cmd_plot(o, out, err);
    if (*occ) cmd_occlusion(o, out);
    if (*bins) cmd_bins(o, out, err);
    if (*pc) cmd_pca(o, out, err);
    if (*serve_cmd) cmd_serve(o, out, err);
    if (*mesh) cmd_mesh(o, out);
    if (*synth) cmd_synth(o, out);
  } catch (const IngestionError& e) {
    err << "error: data: " << e.what() << '\n';
    return kExitData;
  } catch (const BindError& e) {
    err << "error: data: " << e.what() << " (row " << e.row() << ", channel " << e.channel() << ")\n";
    return kExitData;
  } catch (const DomainError& e) {
    err << "error: data: " << e.what() << '\n';
    return kExitData;
  } catch (const FormatError& e) {
    err << "error: data: " << e.what() << '\n';
    return kExitData;
  } catch (const VersionError& e) {
    err << "error: data: " << e.what() << '\n';
    return kExitData;
  } catch (const TruncationError& e) {
    err << "error: data: " << e.what() << '\n';
    return kExitData;
  } catch (const ParameterError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConsistencyError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace glyphscape
