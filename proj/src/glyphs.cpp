// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/glyphs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "glyphscape/error.hpp"

namespace glyphscape {

namespace {

constexpr double kTorusMajor = 0.35;
constexpr double kTorusMinor = 0.15;

// Calibration renders cover 4 world units across 256 pixels.
constexpr int kCalibrationSize = 256;
constexpr double kCalibrationSpan = 4.0;

std::uint32_t add_vertex(Mesh& m, Vec3 p, Vec3 n) {
  m.vertices.push_back(p);
  m.normals.push_back(normalized(n));
  return static_cast<std::uint32_t>(m.vertices.size() - 1);
}

void add_triangle(Mesh& m, std::uint32_t a, std::uint32_t b, std::uint32_t c, bool smooth) {
  m.triangles.push_back({a, b, c});
  m.smooth.push_back(smooth ? 1 : 0);
}

// Flips any triangle whose face normal points towards `inside(centroid)`.
void orient_outward(Mesh& m, const std::function<Vec3(Vec3)>& inside) {
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    Triangle& tri = m.triangles[t];
    const Vec3 centroid = (m.vertices[tri[0]] + m.vertices[tri[1]] + m.vertices[tri[2]]) * (1.0 / 3.0);
    if (dot(face_normal(m, t), centroid - inside(centroid)) < 0.0) std::swap(tri[1], tri[2]);
  }
}

Vec3 origin(Vec3) { return {0, 0, 0}; }

Mesh build_cube() {
  Mesh m;
  for (int i = 0; i < 8; ++i) {
    const Vec3 p{(i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5, (i & 4) ? 0.5 : -0.5};
    add_vertex(m, p, p);
  }
  // Two triangles per face, listed by axis.
  const std::array<std::array<std::uint32_t, 4>, 6> faces{{
      {0, 2, 6, 4}, {1, 3, 7, 5},  // x = -/+
      {0, 1, 5, 4}, {2, 3, 7, 6},  // y = -/+
      {0, 1, 3, 2}, {4, 5, 7, 6},  // z = -/+
  }};
  for (const auto& f : faces) {
    add_triangle(m, f[0], f[1], f[2], false);
    add_triangle(m, f[0], f[2], f[3], false);
  }
  orient_outward(m, origin);
  return m;
}

Mesh build_tetrahedron() {
  // Alternate corners of a unit cube turned 45 degrees about the vertical:
  // top edge runs towards the viewer, bottom edge across. Left unturned, the
  // single 0 degree arm hides more of itself than the +-25 degree pair does.
  const double h = std::sqrt(2.0) / 2.0;
  Mesh m;
  const std::array<Vec3, 4> p{Vec3{0, 0.5, h}, Vec3{0, 0.5, -h}, Vec3{h, -0.5, 0}, Vec3{-h, -0.5, 0}};
  for (const Vec3& v : p) add_vertex(m, v, v);
  add_triangle(m, 0, 1, 2, false);
  add_triangle(m, 0, 1, 3, false);
  add_triangle(m, 0, 2, 3, false);
  add_triangle(m, 1, 2, 3, false);
  orient_outward(m, origin);
  return m;
}

Mesh build_sphere(int res) {
  const int rings = std::max(4, res / 2);
  Mesh m;
  const auto north = add_vertex(m, {0, 0.5, 0}, {0, 1, 0});
  for (int i = 1; i < rings; ++i) {
    const double phi = kPi * i / rings;
    for (int j = 0; j < res; ++j) {
      const double theta = 2.0 * kPi * j / res;
      const Vec3 dir{std::sin(phi) * std::sin(theta), std::cos(phi), std::sin(phi) * std::cos(theta)};
      add_vertex(m, dir * 0.5, dir);
    }
  }
  const auto south = add_vertex(m, {0, -0.5, 0}, {0, -1, 0});
  auto ring = [res](int i, int j) { return static_cast<std::uint32_t>(1 + (i - 1) * res + (j % res)); };
  for (int j = 0; j < res; ++j) {
    add_triangle(m, north, ring(1, j), ring(1, j + 1), true);
    add_triangle(m, south, ring(rings - 1, j + 1), ring(rings - 1, j), true);
  }
  for (int i = 1; i < rings - 1; ++i) {
    for (int j = 0; j < res; ++j) {
      add_triangle(m, ring(i, j), ring(i + 1, j), ring(i + 1, j + 1), true);
      add_triangle(m, ring(i, j), ring(i + 1, j + 1), ring(i, j + 1), true);
    }
  }
  orient_outward(m, origin);
  return m;
}

Mesh build_cylinder(int res) {
  Mesh m;
  std::vector<std::uint32_t> top;
  std::vector<std::uint32_t> bottom;
  for (int j = 0; j < res; ++j) {
    const double theta = 2.0 * kPi * j / res;
    const Vec3 radial{std::sin(theta), 0, std::cos(theta)};
    top.push_back(add_vertex(m, radial * 0.5 + Vec3{0, 0.5, 0}, radial));
    bottom.push_back(add_vertex(m, radial * 0.5 + Vec3{0, -0.5, 0}, radial));
  }
  const auto top_center = add_vertex(m, {0, 0.5, 0}, {0, 1, 0});
  const auto bottom_center = add_vertex(m, {0, -0.5, 0}, {0, -1, 0});
  for (int j = 0; j < res; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const auto n = static_cast<std::size_t>((j + 1) % res);
    add_triangle(m, top[k], bottom[k], bottom[n], true);
    add_triangle(m, top[k], bottom[n], top[n], true);
    add_triangle(m, top_center, top[k], top[n], false);
    add_triangle(m, bottom_center, bottom[n], bottom[k], false);
  }
  orient_outward(m, origin);
  return m;
}

Mesh build_cone(int res) {
  Mesh m;
  std::vector<std::uint32_t> rim;
  for (int j = 0; j < res; ++j) {
    const double theta = 2.0 * kPi * j / res;
    const Vec3 radial{std::sin(theta), 0, std::cos(theta)};
    // Slant normal for height 1, radius 0.5.
    rim.push_back(add_vertex(m, radial * 0.5 + Vec3{0, -0.5, 0}, radial + Vec3{0, 0.5, 0}));
  }
  const auto apex = add_vertex(m, {0, 0.5, 0}, {0, 1, 0});
  const auto base_center = add_vertex(m, {0, -0.5, 0}, {0, -1, 0});
  for (int j = 0; j < res; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const auto n = static_cast<std::size_t>((j + 1) % res);
    add_triangle(m, apex, rim[k], rim[n], true);
    add_triangle(m, base_center, rim[n], rim[k], false);
  }
  orient_outward(m, origin);
  return m;
}

Mesh build_torus(int res) {
  const int minor_segments = std::max(kMinResolution, res / 2);
  Mesh m;
  for (int i = 0; i < res; ++i) {
    const double theta = 2.0 * kPi * i / res;
    const Vec3 radial{std::sin(theta), 0, std::cos(theta)};
    for (int j = 0; j < minor_segments; ++j) {
      const double phi = 2.0 * kPi * j / minor_segments;
      const Vec3 n = radial * std::cos(phi) + Vec3{0, std::sin(phi), 0};
      add_vertex(m, radial * kTorusMajor + n * kTorusMinor, n);
    }
  }
  auto at = [&](int i, int j) {
    return static_cast<std::uint32_t>((i % res) * minor_segments + (j % minor_segments));
  };
  for (int i = 0; i < res; ++i) {
    for (int j = 0; j < minor_segments; ++j) {
      add_triangle(m, at(i, j), at(i + 1, j), at(i + 1, j + 1), true);
      add_triangle(m, at(i, j), at(i + 1, j + 1), at(i, j + 1), true);
    }
  }
  orient_outward(m, [](Vec3 c) {
    const Vec3 flat{c.x, 0, c.z};
    return normalized(flat) * kTorusMajor;
  });
  return m;
}

struct RayHit {
  double t = -1.0;
  Vec3 point;
  Vec3 normal;
};

// Farthest intersection of the ray origin + t*dir (t > 0) with the mesh.
RayHit last_exit(const Mesh& mesh, Vec3 ray_origin, Vec3 dir) {
  RayHit best;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    const Vec3 a = mesh.vertices[tri[0]];
    const Vec3 e1 = mesh.vertices[tri[1]] - a;
    const Vec3 e2 = mesh.vertices[tri[2]] - a;
    const Vec3 pvec = cross(dir, e2);
    const double det = dot(e1, pvec);
    if (std::abs(det) < 1e-15) continue;
    const double inv = 1.0 / det;
    const Vec3 tvec = ray_origin - a;
    const double u = dot(tvec, pvec) * inv;
    if (u < 0.0 || u > 1.0) continue;
    const Vec3 qvec = cross(tvec, e1);
    const double v = dot(dir, qvec) * inv;
    if (v < 0.0 || u + v > 1.0) continue;
    const double dist = dot(e2, qvec) * inv;
    if (dist <= 1e-12 || dist <= best.t) continue;
    best.t = dist;
    best.point = ray_origin + dir * dist;
    if (mesh.smooth[t] != 0) {
      best.normal = normalized(mesh.normals[tri[0]] * (1.0 - u - v) + mesh.normals[tri[1]] * u +
                               mesh.normals[tri[2]] * v);
    } else {
      best.normal = normalized(face_normal(mesh, t));
    }
  }
  return best;
}

constexpr double kMinExitCosine = 0.5;

// Stand-in when a placement ray misses or grazes the surface: the vertex
// furthest along the ray direction, where the outward normal points roughly
// along the ray.
RayHit support_point(const Mesh& mesh, Vec3 dir) {
  RayHit best;
  double best_t = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const double t = dot(mesh.vertices[i], dir);
    if (t > best_t) {
      best_t = t;
      best = {t, mesh.vertices[i], mesh.normals[i]};
    }
  }
  return best;
}

}  // namespace

std::string_view shape_name(GlyphShape shape) {
  switch (shape) {
    case GlyphShape::kSphere: return "Sphere";
    case GlyphShape::kCube: return "Cube";
    case GlyphShape::kTetrahedron: return "Tetrahedron";
    case GlyphShape::kCone: return "Cone";
    case GlyphShape::kTorus: return "Torus";
    case GlyphShape::kCylinder: return "Cylinder";
  }
  return "?";
}

std::optional<GlyphShape> parse_shape(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "sphere" || lower == "ball") return GlyphShape::kSphere;
  if (lower == "cube" || lower == "box") return GlyphShape::kCube;
  if (lower == "tetrahedron" || lower == "tet" || lower == "pyramid") return GlyphShape::kTetrahedron;
  if (lower == "cone") return GlyphShape::kCone;
  if (lower == "torus") return GlyphShape::kTorus;
  if (lower == "cylinder" || lower == "can") return GlyphShape::kCylinder;
  return std::nullopt;
}

void GlyphSpec::validate() const {
  if (static_cast<int>(shape) >= kShapeCount) {
    throw ParameterError("unknown glyph shape code " + std::to_string(static_cast<int>(shape)));
  }
  if (left_arms < 0 || left_arms > kMaxArms || right_arms < 0 || right_arms > kMaxArms) {
    throw ParameterError("arm counts must lie in 0..3");
  }
}

GlyphSpec GlyphSpec::from_key(int key) {
  if (key < 0 || key >= kSpecCount) throw ParameterError("glyph spec key out of range");
  return {static_cast<GlyphShape>(key / 16), (key / 4) % 4, key % 4};
}

Mesh build_base_mesh(GlyphShape shape, int resolution) {
  if (resolution < kMinResolution) {
    throw ParameterError("mesh resolution must be at least " + std::to_string(kMinResolution) + ", got " +
                         std::to_string(resolution));
  }
  switch (shape) {
    case GlyphShape::kSphere: return build_sphere(resolution);
    case GlyphShape::kCube: return build_cube();
    case GlyphShape::kTetrahedron: return build_tetrahedron();
    case GlyphShape::kCone: return build_cone(resolution);
    case GlyphShape::kTorus: return build_torus(resolution);
    case GlyphShape::kCylinder: return build_cylinder(resolution);
  }
  throw ParameterError("unknown glyph shape");
}

Vec3 canonical_axis() {
  const double a = deg_to_rad(30.0);
  return {std::sin(a), std::cos(a), 0.0};
}

Mat3 canonical_orientation() {
  static const Mat3 rotation = axis_angle(canonical_axis(), deg_to_rad(30.0));
  return rotation;
}

OrthoCamera calibration_camera() {
  return {{0.0, 0.0}, kCalibrationSpan / kCalibrationSize, kCalibrationSize, kCalibrationSize};
}

std::size_t calibrated_silhouette(const Mesh& mesh) {
  return silhouette_pixel_count(transformed(mesh, canonical_orientation()), calibration_camera());
}

NormalizedMesh normalize_perceived_size(const Mesh& mesh, GlyphShape shape, double reference_area) {
  if (!(reference_area > 0.0)) throw ParameterError("reference area must be positive");
  auto area_at = [&](double s) { return static_cast<double>(calibrated_silhouette(scaled(mesh, s))); };

  const double unit_area = area_at(1.0);
  if (unit_area == reference_area) return {mesh, 1.0, 1.0};

  double lo = 0.5;
  double hi = 2.0;
  double best_scale = 1.0;
  double best_area = unit_area;
  for (int iter = 0; iter < 30; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double a = area_at(mid);
    if (std::abs(a - reference_area) < std::abs(best_area - reference_area)) {
      best_scale = mid;
      best_area = a;
    }
    if (a == reference_area) break;
    if (a < reference_area) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double ratio = best_area / reference_area;
  if (std::abs(ratio - 1.0) > kSizeTolerance) {
    throw NormalizationError(std::string(shape_name(shape)) + " silhouette could not be matched; best ratio " +
                                 std::to_string(ratio),
                             ratio);
  }
  return {scaled(mesh, best_scale), best_scale, ratio};
}

std::vector<double> arm_elevations(int count) {
  switch (count) {
    case 0: return {};
    case 1: return {0.0};
    case 2: return {kArmElevationDeg, -kArmElevationDeg};
    case 3: return {kArmElevationDeg, 0.0, -kArmElevationDeg};
    default: throw ParameterError("arm count must lie in 0..3");
  }
}

std::vector<ArmPlacement> arm_placements(const Mesh& base, const GlyphSpec& spec) {
  spec.validate();
  std::vector<ArmPlacement> out;
  const double arm_height = kArmScale * bounds(base).extent().y;
  auto place_side = [&](ArmSide side, int count) {
    const double sx = side == ArmSide::kLeft ? -1.0 : 1.0;
    for (double elevation : arm_elevations(count)) {
      const Vec3 dir = normalized({sx, std::tan(deg_to_rad(elevation)), 0.0});
      RayHit hit = last_exit(base, {0, 0, 0}, dir);
      // A ray that only clips the surface (the torus tube at +-25 degrees)
      // exits where the normal points sideways or inwards; an arm there
      // would lie flat on the base.
      if (hit.t < 0.0 || dot(hit.normal, dir) < kMinExitCosine) hit = support_point(base, dir);
      ArmPlacement p;
      p.side = side;
      p.elevation_deg = elevation;
      p.attachment = hit.point;
      p.normal = hit.normal;
      p.center = hit.point + hit.normal * ((0.5 - kArmEmbedFraction) * arm_height);
      out.push_back(p);
    }
  };
  place_side(ArmSide::kLeft, spec.left_arms);
  place_side(ArmSide::kRight, spec.right_arms);
  return out;
}

Mesh make_arm(const Mesh& base, const ArmPlacement& placement) {
  const Mat3 align = rotation_between({0, 1, 0}, placement.normal);
  return translated(transformed(scaled(base, kArmScale), align), placement.center);
}

Mesh attach_arms(const Mesh& base, const GlyphSpec& spec) {
  Mesh out = base;
  for (const ArmPlacement& p : arm_placements(base, spec)) out.append(make_arm(base, p));
  return out;
}

GlyphLibrary::GlyphLibrary(int resolution) : resolution_(resolution) {
  const Mesh cube = build_base_mesh(GlyphShape::kCube, resolution);
  reference_area_ = static_cast<double>(calibrated_silhouette(cube));
  for (GlyphShape shape : kAllShapes) {
    const auto i = static_cast<std::size_t>(shape);
    NormalizedMesh n = normalize_perceived_size(build_base_mesh(shape, resolution), shape, reference_area_);
    scale_[i] = n.scale_factor;
    ratio_[i] = n.area_ratio;
    bases_[i] = std::move(n.mesh);
  }

  const Mat3 orient = canonical_orientation();
  meshes_.resize(kSpecCount);
  parts_.resize(kSpecCount);
  for (int key = 0; key < kSpecCount; ++key) {
    const GlyphSpec spec = GlyphSpec::from_key(key);
    const Mesh& base = bases_[static_cast<std::size_t>(spec.shape)];
    Mesh left;
    Mesh right;
    std::vector<std::shared_ptr<const Mesh>> arms;
    for (const ArmPlacement& p : arm_placements(base, spec)) {
      Mesh arm = make_arm(base, p);
      (p.side == ArmSide::kLeft ? left : right).append(arm);
      arms.push_back(std::make_shared<const Mesh>(transformed(arm, orient)));
    }
    Mesh whole = base;
    whole.append(left);
    whole.append(right);
    const auto k = static_cast<std::size_t>(key);
    meshes_[k] = std::make_shared<const Mesh>(transformed(whole, orient));
    parts_[k] = {std::make_shared<const Mesh>(transformed(base, orient)),
                 std::make_shared<const Mesh>(transformed(left, orient)),
                 std::make_shared<const Mesh>(transformed(right, orient)), std::move(arms)};
  }
}

const std::shared_ptr<const Mesh>& GlyphLibrary::mesh(const GlyphSpec& spec) const {
  spec.validate();
  return meshes_[static_cast<std::size_t>(spec.key())];
}

const GlyphParts& GlyphLibrary::parts(const GlyphSpec& spec) const {
  spec.validate();
  return parts_[static_cast<std::size_t>(spec.key())];
}

const GlyphLibrary& GlyphLibrary::standard() {
  static const GlyphLibrary library(kDefaultResolution);
  return library;
}

}  // namespace glyphscape
