// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "glyphscape/error.hpp"

namespace glyphscape {

namespace {

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_nothing(png_structp) {}

struct ReadCursor {
  const std::vector<std::uint8_t>* bytes;
  std::size_t offset;
};

void read_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->offset + length > cur->bytes->size()) png_error(png, "truncated PNG");
  std::memcpy(data, cur->bytes->data() + cur->offset, length);
  cur->offset += length;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Framebuffer& fb) {
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("PNG encoding failed");
  }
  png_set_write_fn(png, &out, append_bytes, flush_nothing);
  png_set_IHDR(png, info, static_cast<png_uint_32>(fb.width()), static_cast<png_uint_32>(fb.height()), 8,
               PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  static_assert(sizeof(Rgba8) == 4);
  for (int y = 0; y < fb.height(); ++y) {
    auto* row = const_cast<png_bytep>(reinterpret_cast<const std::uint8_t*>(&fb.color[fb.index(0, y)]));
    png_write_row(png, row);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png(const std::string& path, const Framebuffer& fb) {
  const auto bytes = encode_png(fb);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("failed writing " + path);
}

std::vector<Rgba8> decode_png(const std::vector<std::uint8_t>& bytes, int& width, int& height) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw FormatError("not a PNG stream");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<Rgba8> pixels;
  ReadCursor cursor{&bytes, 0};
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("PNG decoding failed");
  }
  png_set_read_fn(png, &cursor, read_bytes);
  png_read_info(png, info);
  if (png_get_color_type(png, info) != PNG_COLOR_TYPE_RGBA || png_get_bit_depth(png, info) != 8) {
    png_error(png, "only 8-bit RGBA is supported");
  }
  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  pixels.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    png_read_row(png, reinterpret_cast<png_bytep>(&pixels[static_cast<std::size_t>(y) * width]), nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return pixels;
}

void write_depth_pgm(const std::string& path, const Framebuffer& fb) {
  float lo = std::numeric_limits<float>::infinity();
  float hi = -lo;
  for (float d : fb.depth) {
    if (std::isfinite(d)) {
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << "P5\n" << fb.width() << ' ' << fb.height() << "\n255\n";
  const float span = hi > lo ? hi - lo : 1.0f;
  for (float d : fb.depth) {
    std::uint8_t v = 255;
    if (std::isfinite(d)) v = static_cast<std::uint8_t>(std::lround(200.0 * (d - lo) / span));
    f.put(static_cast<char>(v));
  }
}

}  // namespace glyphscape
