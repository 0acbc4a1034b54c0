// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "glyphscape/math.hpp"
#include "glyphscape/mesh.hpp"
#include "glyphscape/raster.hpp"

namespace glyphscape {

enum class GlyphShape : std::uint8_t {
  kSphere = 0,
  kCube = 1,
  kTetrahedron = 2,
  kCone = 3,
  kTorus = 4,
  kCylinder = 5,
};

inline constexpr int kShapeCount = 6;
inline constexpr int kMaxArms = 3;
inline constexpr int kSpecCount = kShapeCount * (kMaxArms + 1) * (kMaxArms + 1);

inline constexpr std::array<GlyphShape, kShapeCount> kAllShapes{
    GlyphShape::kSphere, GlyphShape::kCube,  GlyphShape::kTetrahedron,
    GlyphShape::kCone,   GlyphShape::kTorus, GlyphShape::kCylinder};

std::string_view shape_name(GlyphShape shape);
/// Case-insensitive; accepts the enum names and a few common aliases
/// ("box", "ball", "tet", "can", ...).
std::optional<GlyphShape> parse_shape(std::string_view name);

/// Shapes whose outline is at least partly curved get the overshoot.
constexpr bool has_curved_profile(GlyphShape shape) {
  return shape != GlyphShape::kCube && shape != GlyphShape::kTetrahedron;
}

struct GlyphSpec {
  GlyphShape shape = GlyphShape::kSphere;
  int left_arms = 0;
  int right_arms = 0;

  void validate() const;
  /// Dense index in (shape, left, right) ascending order, 0..95.
  int key() const { return (static_cast<int>(shape) * 4 + left_arms) * 4 + right_arms; }
  static GlyphSpec from_key(int key);
  friend bool operator==(const GlyphSpec&, const GlyphSpec&) = default;
};

inline constexpr int kMinResolution = 8;
inline constexpr int kDefaultResolution = 32;

/// Unscaled shape in its local frame (y up, z towards the viewer):
/// cube edge 1, sphere radius 0.5, cylinder r 0.5 h 1, cone r 0.5 h 1 apex up,
/// regular tetrahedron with a horizontal top edge pointing at the viewer,
/// torus R 0.35 r 0.15 about the vertical axis.
Mesh build_base_mesh(GlyphShape shape, int resolution = kDefaultResolution);

/// The one rotation every glyph is drawn with: 30 degrees about the screen-up
/// vector tilted 30 degrees towards +x.
Mat3 canonical_orientation();
Vec3 canonical_axis();

/// Camera used to calibrate perceived size (256x256).
OrthoCamera calibration_camera();

/// Silhouette of `mesh` (local frame) after canonical orientation, at the
/// calibration camera.
std::size_t calibrated_silhouette(const Mesh& mesh);

struct NormalizedMesh {
  Mesh mesh;
  double scale_factor = 1.0;
  /// Achieved silhouette / reference silhouette.
  double area_ratio = 1.0;
};

inline constexpr double kSizeTolerance = 0.01;

/// Uniformly rescales `mesh` so its calibrated silhouette matches
/// `reference_area` within 1%. Bisection over scale in [0.5, 2].
NormalizedMesh normalize_perceived_size(const Mesh& mesh, GlyphShape shape, double reference_area);

enum class ArmSide : std::uint8_t { kLeft, kRight };

inline constexpr double kArmScale = 0.25;
inline constexpr double kArmElevationDeg = 25.0;
inline constexpr double kArmEmbedFraction = 0.2;

struct ArmPlacement {
  ArmSide side = ArmSide::kLeft;
  double elevation_deg = 0.0;
  Vec3 attachment;  // where the placement ray leaves the base surface
  Vec3 normal;      // outward unit surface normal there
  Vec3 center;      // arm center (local frame)
};

/// Elevations used for `count` arms, top first.
std::vector<double> arm_elevations(int count);

/// Where each arm of `spec` sits on `base` (local frame, pre-orientation).
std::vector<ArmPlacement> arm_placements(const Mesh& base, const GlyphSpec& spec);

/// One miniature copy of `base` placed per `placement`.
Mesh make_arm(const Mesh& base, const ArmPlacement& placement);

/// `base` plus all arms of `spec`, in the local frame.
Mesh attach_arms(const Mesh& base, const GlyphSpec& spec);

/// Oriented meshes for one glyph split into components.
struct GlyphParts {
  std::shared_ptr<const Mesh> base;
  std::shared_ptr<const Mesh> left_arms;   // may be empty
  std::shared_ptr<const Mesh> right_arms;  // may be empty
  /// Each arm on its own, left side first, top to bottom.
  std::vector<std::shared_ptr<const Mesh>> arms;
};

/// Normalized, armed and oriented meshes for all 96 glyph specs.
class GlyphLibrary {
 public:
  explicit GlyphLibrary(int resolution = kDefaultResolution);

  int resolution() const { return resolution_; }
  double reference_area() const { return reference_area_; }
  double scale_factor(GlyphShape shape) const { return scale_[static_cast<std::size_t>(shape)]; }
  double area_ratio(GlyphShape shape) const { return ratio_[static_cast<std::size_t>(shape)]; }

  /// Size-normalized base in the local frame (before orientation).
  const Mesh& normalized_base(GlyphShape shape) const { return bases_[static_cast<std::size_t>(shape)]; }

  /// Complete oriented glyph.
  const std::shared_ptr<const Mesh>& mesh(const GlyphSpec& spec) const;
  const GlyphParts& parts(const GlyphSpec& spec) const;

  /// Process-wide library at the default resolution.
  static const GlyphLibrary& standard();

 private:
  int resolution_;
  double reference_area_ = 0.0;
  std::array<double, kShapeCount> scale_{};
  std::array<double, kShapeCount> ratio_{};
  std::array<Mesh, kShapeCount> bases_;
  std::vector<std::shared_ptr<const Mesh>> meshes_;
  std::vector<GlyphParts> parts_;
};

}  // namespace glyphscape
