#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "msbem/common.hpp"

namespace msbem::geometry {

enum class ShapeKind { ellipse, rounded_rectangle, kite };

std::string to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(const std::string& name);

/// Smooth closed obstacle boundary, counter-clockwise parametrized over [0, 2 pi).
///
/// - ellipse: semi-axes a, b.
/// - rounded_rectangle: superellipse |x/a|^p + |y/b|^p = 1 with even p >= 4.
/// - kite: s * (cos t + 0.65 cos 2t - 0.65, 1.5 sin t).
///
/// The local curve is rotated by `rotation` and translated to `center`.
struct Shape {
  ShapeKind kind = ShapeKind::ellipse;
  double a = 1.0;
  double b = 1.0;
  int exponent = 8;
  double scale = 1.0;
  double rotation = 0.0;
  Vec2 center = Vec2::Zero();

  static Shape ellipse(double a, double b);
  static Shape rounded_rectangle(double a, double b, int exponent = 8);
  static Shape kite(double scale);

  /// Throws ParameterError on non-positive sizes or a bad exponent.
  void validate() const;
  /// Radius of a disk about `center` containing the whole curve.
  double bounding_radius() const;
};

struct BoundaryPoint {
  Vec2 point;
  Vec2 normal;  // outward unit normal
};

BoundaryPoint parametrize(const Shape& shape, double t);

/// Derivative of the parametrization with respect to t (rotated frame).
Vec2 parametrize_derivative(const Shape& shape, double t);

/// Closed polygonal approximation of one obstacle boundary.
struct ObstacleMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 2>> segments;  // local node indices, closed loop
  std::vector<Vec2> normals;                 // per segment, outward
  std::vector<double> lengths;               // per segment
  double perimeter = 0.0;

  std::size_t size() const { return nodes.size(); }
  double max_length() const;
  double signed_area() const;
  Vec2 centroid() const;
  /// Length-weighted average of the two adjacent segment normals, renormalized.
  std::vector<Vec2> node_normals() const;
};

/// Nodes at equal arclength steps of at most 2 pi / (k ppw).
ObstacleMesh mesh_boundary(const Shape& shape, double k, double ppw);

/// Smooth-curve perimeter from the same 2048-point trapezoid rule the mesher uses.
double curve_perimeter(const Shape& shape);

struct Box {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  double area() const { return (xmax - xmin) * (ymax - ymin); }
};

struct Scene {
  double k = 1.0;
  Vec2 beta = Vec2(0.0, 1.0);
  std::vector<Shape> obstacles;
  Box box;
  double min_center_distance = 3.0;
  std::uint64_t seed = 0;

  /// k > 0, unit beta, valid shapes, pairwise center distance >= minimum.
  void validate() const;
};

/// Scene recipe whose placements are drawn at random.
///
/// Each template's center and rotation are ignored. Sizes are multiplied by a
/// factor drawn uniformly from [size_min, size_max]; rotations are uniform in
/// [0, 2 pi) when `random_rotation` is set. Rejection sampling succeeds
/// reliably when box area >= 4 M d^2 (d = min_center_distance).
struct SceneConfig {
  double k = 1.0;
  Vec2 beta = Vec2(0.0, 1.0);
  std::vector<Shape> templates;
  Box box;
  double min_center_distance = 3.0;
  bool random_rotation = true;
  double size_min = 1.0;
  double size_max = 1.0;
};

/// Deterministic for a fixed (config, seed). Throws ParameterError when
/// placement keeps failing after a bounded number of rejection rounds.
Scene generate_scene(const SceneConfig& config, std::uint64_t seed);

/// All obstacle meshes with one global, obstacle-contiguous node numbering.
struct SceneMesh {
  std::vector<ObstacleMesh> obstacles;
  std::vector<Index> block_offsets;  // size M + 1, last entry = total nodes

  Index size() const { return block_offsets.empty() ? 0 : block_offsets.back(); }
  std::size_t obstacle_count() const { return obstacles.size(); }
  Index block_size(std::size_t p) const { return block_offsets[p + 1] - block_offsets[p]; }
  double max_length() const;
  double total_perimeter() const;
};

SceneMesh mesh_scene(const Scene& scene, double ppw);
SceneMesh make_scene_mesh(std::vector<ObstacleMesh> obstacles);

}  // namespace msbem::geometry
