// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/mesh.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <utility>

namespace glyphscape {

void Mesh::append(const Mesh& other) {
  const auto base = static_cast<std::uint32_t>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  normals.insert(normals.end(), other.normals.begin(), other.normals.end());
  triangles.reserve(triangles.size() + other.triangles.size());
  for (const Triangle& t : other.triangles) {
    triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  }
  smooth.insert(smooth.end(), other.smooth.begin(), other.smooth.end());
}

Bounds3 bounds(const Mesh& mesh) {
  if (mesh.vertices.empty()) return {};
  constexpr double inf = std::numeric_limits<double>::infinity();
  Bounds3 b{{inf, inf, inf}, {-inf, -inf, -inf}};
  for (const Vec3& v : mesh.vertices) {
    b.min = {std::min(b.min.x, v.x), std::min(b.min.y, v.y), std::min(b.min.z, v.z)};
    b.max = {std::max(b.max.x, v.x), std::max(b.max.y, v.y), std::max(b.max.z, v.z)};
  }
  return b;
}

Vec3 face_normal(const Mesh& mesh, std::size_t t) {
  const Triangle& tri = mesh.triangles[t];
  const Vec3 a = mesh.vertices[tri[0]];
  return cross(mesh.vertices[tri[1]] - a, mesh.vertices[tri[2]] - a);
}

Mesh transformed(const Mesh& mesh, const Mat3& rotation) {
  Mesh out = mesh;
  for (Vec3& v : out.vertices) v = rotation * v;
  for (Vec3& n : out.normals) n = normalized(rotation * n);
  return out;
}

Mesh scaled(const Mesh& mesh, double factor) {
  Mesh out = mesh;
  for (Vec3& v : out.vertices) v = v * factor;
  return out;
}

Mesh translated(const Mesh& mesh, Vec3 offset) {
  Mesh out = mesh;
  for (Vec3& v : out.vertices) v = v + offset;
  return out;
}

double signed_volume(const Mesh& mesh) {
  double six_v = 0.0;
  for (const Triangle& t : mesh.triangles) {
    six_v += dot(mesh.vertices[t[0]], cross(mesh.vertices[t[1]], mesh.vertices[t[2]]));
  }
  return six_v / 6.0;
}

bool is_watertight(const Mesh& mesh) {
  if (mesh.triangles.empty()) return false;
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_use;
  for (const Triangle& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      auto a = t[static_cast<std::size_t>(e)];
      auto b = t[static_cast<std::size_t>((e + 1) % 3)];
      if (a > b) std::swap(a, b);
      ++edge_use[{a, b}];
    }
  }
  return std::all_of(edge_use.begin(), edge_use.end(),
                     [](const auto& kv) { return kv.second == 2; });
}

bool is_well_formed(const Mesh& mesh, double normal_tol, double min_area) {
  if (mesh.normals.size() != mesh.vertices.size()) return false;
  if (mesh.smooth.size() != mesh.triangles.size()) return false;
  for (const Vec3& n : mesh.normals) {
    if (std::abs(length(n) - 1.0) > normal_tol) return false;
  }
  const auto count = mesh.vertices.size();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (auto idx : mesh.triangles[t]) {
      if (idx >= count) return false;
    }
    if (0.5 * length(face_normal(mesh, t)) <= min_area) return false;
  }
  return true;
}

void write_obj(std::ostream& out, const Mesh& mesh) {
  out.precision(9);
  for (const Vec3& v : mesh.vertices) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const Vec3& n : mesh.normals) out << "vn " << n.x << ' ' << n.y << ' ' << n.z << '\n';
  for (const Triangle& t : mesh.triangles) {
    out << 'f';
    for (auto idx : t) out << ' ' << idx + 1 << "//" << idx + 1;
    out << '\n';
  }
}

}  // namespace glyphscape
