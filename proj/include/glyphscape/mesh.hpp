// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "glyphscape/math.hpp"

namespace glyphscape {

using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle mesh. Triangles wind counter-clockwise seen from outside.
///
/// `smooth[t]` selects interpolated vertex normals for triangle t; otherwise
/// the triangle is shaded with its geometric face normal.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<Triangle> triangles;
  std::vector<std::uint8_t> smooth;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  bool empty() const { return triangles.empty(); }

  /// Appends `other`, offsetting its indices.
  void append(const Mesh& other);
};

struct Bounds3 {
  Vec3 min{0, 0, 0};
  Vec3 max{0, 0, 0};
  Vec3 extent() const { return max - min; }
};

Bounds3 bounds(const Mesh& mesh);

/// Unnormalized geometric normal of triangle `t` (length = 2 * area).
Vec3 face_normal(const Mesh& mesh, std::size_t t);

/// Applies `rotation` to positions and normals.
Mesh transformed(const Mesh& mesh, const Mat3& rotation);
Mesh scaled(const Mesh& mesh, double factor);
Mesh translated(const Mesh& mesh, Vec3 offset);

/// Signed enclosed volume; positive for closed, outward-wound meshes.
double signed_volume(const Mesh& mesh);

/// Every undirected edge is shared by exactly two triangles.
bool is_watertight(const Mesh& mesh);

/// All indices in range, normals unit length, no zero-area triangles.
bool is_well_formed(const Mesh& mesh, double normal_tol = 1e-6, double min_area = 1e-12);

/// ASCII Wavefront OBJ with positions, normals and faces.
void write_obj(std::ostream& out, const Mesh& mesh);

}  // namespace glyphscape
