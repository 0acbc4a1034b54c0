// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glyphscape/raster.hpp"

namespace glyphscape {

/// 8-bit RGBA PNG of the color target.
std::vector<std::uint8_t> encode_png(const Framebuffer& fb);
void write_png(const std::string& path, const Framebuffer& fb);

/// Decodes an 8-bit RGBA PNG produced by encode_png (used by tests/tools).
std::vector<Rgba8> decode_png(const std::vector<std::uint8_t>& bytes, int& width, int& height);

/// Binary PGM visualizing depth: nearest covered pixel black, farthest light
/// gray, background white. Debug aid only.
void write_depth_pgm(const std::string& path, const Framebuffer& fb);

}  // namespace glyphscape
