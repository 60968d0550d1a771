#include "msbem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace msbem::geometry {

namespace {

constexpr int kArclengthSamples = 2048;
constexpr double kKiteBulge = 0.65;
constexpr double kKiteHeight = 1.5;

struct LocalCurve {
  Vec2 point;
  Vec2 derivative;
};

LocalCurve local_curve(const Shape& shape, double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  switch (shape.kind) {
    case ShapeKind::ellipse:
      return {Vec2(shape.a * c, shape.b * s), Vec2(-shape.a * s, shape.b * c)};
    case ShapeKind::rounded_rectangle: {
      const int p = shape.exponent;
      const double ap = std::pow(shape.a, p);
      const double bp = std::pow(shape.b, p);
      const double cp1 = std::pow(c, p - 1);
      const double sp1 = std::pow(s, p - 1);
      const double f = cp1 * c / ap + sp1 * s / bp;
      const double r = std::pow(f, -1.0 / p);
      const double dr = r * (cp1 * s / ap - sp1 * c / bp) / f;
      return {Vec2(r * c, r * s), Vec2(dr * c - r * s, dr * s + r * c)};
    }
    case ShapeKind::kite: {
      const double k = shape.scale;
      return {k * Vec2(c + kKiteBulge * std::cos(2.0 * t) - kKiteBulge, kKiteHeight * s),
              k * Vec2(-s - 2.0 * kKiteBulge * std::sin(2.0 * t), kKiteHeight * c)};
    }
  }
  throw ParameterError("unknown shape kind");
}

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

double speed(const Shape& shape, double t) { return local_curve(shape, t).derivative.norm(); }

// Cumulative arclength on a uniform parameter grid of kArclengthSamples cells.
std::vector<double> cumulative_arclength(const Shape& shape) {
  const double dt = 2.0 * kPi / kArclengthSamples;
  std::vector<double> cumulative(kArclengthSamples + 1, 0.0);
  double previous = speed(shape, 0.0);
  for (int i = 1; i <= kArclengthSamples; ++i) {
    const double current = speed(shape, i * dt);
    cumulative[i] = cumulative[i - 1] + 0.5 * dt * (previous + current);
    previous = current;
  }
  return cumulative;
}

// 53-bit uniform double in [0, 1); independent of the standard library's
// distribution implementations.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::ellipse:
      return "ellipse";
    case ShapeKind::rounded_rectangle:
      return "rounded_rectangle";
    case ShapeKind::kite:
      return "kite";
  }
  return "unknown";
}

ShapeKind shape_kind_from_string(const std::string& name) {
  if (name == "ellipse") return ShapeKind::ellipse;
  if (name == "rounded_rectangle") return ShapeKind::rounded_rectangle;
  if (name == "kite") return ShapeKind::kite;
  throw ParameterError("unknown shape kind '" + name + "'");
}

Shape Shape::ellipse(double a, double b) {
  Shape s;
  s.kind = ShapeKind::ellipse;
  s.a = a;
  s.b = b;
  return s;
}

Shape Shape::rounded_rectangle(double a, double b, int exponent) {
  Shape s;
  s.kind = ShapeKind::rounded_rectangle;
  s.a = a;
  s.b = b;
  s.exponent = exponent;
  return s;
}

Shape Shape::kite(double scale) {
  Shape s;
  s.kind = ShapeKind::kite;
  s.scale = scale;
  return s;
}

void Shape::validate() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(rotation) || !finite(center.x()) || !finite(center.y())) {
    throw ParameterError("shape placement must be finite");
  }
  switch (kind) {
    case ShapeKind::ellipse:
      if (!(a > 0.0 && b > 0.0 && finite(a) && finite(b))) throw ParameterError("ellipse semi-axes must be positive");
      break;
    case ShapeKind::rounded_rectangle:
      if (!(a > 0.0 && b > 0.0 && finite(a) && finite(b))) {
        throw ParameterError("rounded_rectangle half-widths must be positive");
      }
      if (exponent < 4 || exponent % 2 != 0) {
        throw ParameterError("rounded_rectangle exponent must be even and >= 4");
      }
      break;
    case ShapeKind::kite:
      if (!(scale > 0.0 && finite(scale))) throw ParameterError("kite scale must be positive");
      break;
  }
}

double Shape::bounding_radius() const {
  double r = 0.0;
  for (int i = 0; i < 1024; ++i) {
    r = std::max(r, local_curve(*this, 2.0 * kPi * i / 1024).point.norm());
  }
  return 1.01 * r;
}

BoundaryPoint parametrize(const Shape& shape, double t) {
  const LocalCurve local = local_curve(shape, t);
  const Vec2 d = local.derivative;
  const Vec2 normal = Vec2(d.y(), -d.x()).normalized();
  return {rotate(local.point, shape.rotation) + shape.center, rotate(normal, shape.rotation)};
}

Vec2 parametrize_derivative(const Shape& shape, double t) {
  return rotate(local_curve(shape, t).derivative, shape.rotation);
}

double curve_perimeter(const Shape& shape) { return cumulative_arclength(shape).back(); }

double ObstacleMesh::max_length() const { return lengths.empty() ? 0.0 : *std::max_element(lengths.begin(), lengths.end()); }

double ObstacleMesh::signed_area() const {
  double area = 0.0;
  for (const auto& seg : segments) {
    const Vec2& p = nodes[seg[0]];
    const Vec2& q = nodes[seg[1]];
    area += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * area;
}

Vec2 ObstacleMesh::centroid() const {
  Vec2 c = Vec2::Zero();
  for (const Vec2& p : nodes) c += p;
  return nodes.empty() ? c : Vec2(c / static_cast<double>(nodes.size()));
}

std::vector<Vec2> ObstacleMesh::node_normals() const {
  std::vector<Vec2> out(nodes.size(), Vec2::Zero());
  for (std::size_t s = 0; s < segments.size(); ++s) {
    out[segments[s][0]] += lengths[s] * normals[s];
    out[segments[s][1]] += lengths[s] * normals[s];
  }
  for (Vec2& n : out) n.normalize();
  return out;
}

ObstacleMesh mesh_boundary(const Shape& shape, double k, double ppw) {
  shape.validate();
  if (!(ppw >= 4.0)) {
    throw ParameterError("points per wavelength must be >= 4");
  }
  if (!(k > 0.0)) {
    throw ParameterError("wavenumber must be positive");
  }
  const std::vector<double> cumulative = cumulative_arclength(shape);
  const double perimeter = cumulative.back();
  if (!(perimeter > 0.0) || !std::isfinite(perimeter)) {
    throw ParameterError("degenerate shape: zero or non-finite perimeter");
  }
  const double max_step = 2.0 * kPi / (k * ppw);
  const int n = std::max(3, static_cast<int>(std::ceil(perimeter / max_step * (1.0 - 1e-12))));

  const double dt = 2.0 * kPi / kArclengthSamples;
  ObstacleMesh mesh;
  mesh.nodes.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double target = perimeter * i / n;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const auto cell = static_cast<int>(std::clamp<std::ptrdiff_t>(it - cumulative.begin() - 1, 0, kArclengthSamples - 1));
    const double span = cumulative[cell + 1] - cumulative[cell];
    const double frac = span > 0.0 ? (target - cumulative[cell]) / span : 0.0;
    mesh.nodes.push_back(parametrize(shape, (cell + frac) * dt).point);
  }
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const Vec2 d = mesh.nodes[j] - mesh.nodes[i];
    const double len = d.norm();
    if (!(len > 0.0)) {
      throw ParameterError("degenerate shape: coincident mesh nodes");
    }
    mesh.segments.push_back({i, j});
    mesh.lengths.push_back(len);
    mesh.normals.emplace_back(d.y() / len, -d.x() / len);
    mesh.perimeter += len;
  }
  return mesh;
}

void Scene::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw ParameterError("wavenumber must be positive");
  if (std::abs(beta.norm() - 1.0) > 1e-12) throw ParameterError("incident direction must be a unit vector");
  if (obstacles.empty()) throw ParameterError("scene has no obstacles");
  for (const Shape& s : obstacles) s.validate();
  for (std::size_t p = 0; p < obstacles.size(); ++p) {
    for (std::size_t q = p + 1; q < obstacles.size(); ++q) {
      if ((obstacles[p].center - obstacles[q].center).norm() < min_center_distance) {
        throw ParameterError("obstacles " + std::to_string(p) + " and " + std::to_string(q) +
                             " are closer than the minimum center distance");
      }
    }
  }
}

Scene generate_scene(const SceneConfig& config, std::uint64_t seed) {
  if (config.templates.empty()) throw ParameterError("scene config has no obstacles");
  if (!(config.size_min > 0.0) || config.size_max < config.size_min) {
    throw ParameterError("invalid size range");
  }
  if (!(config.box.xmax > config.box.xmin) || !(config.box.ymax > config.box.ymin)) {
    throw ParameterError("empty placement box");
  }
  constexpr int kRounds = 100;
  constexpr int kDrawsPerObstacle = 2000;

  std::mt19937_64 rng(seed);
  for (int round = 0; round < kRounds; ++round) {
    Scene scene;
    scene.k = config.k;
    scene.beta = config.beta;
    scene.box = config.box;
    scene.min_center_distance = config.min_center_distance;
    scene.seed = seed;
    std::vector<double> radii;
    bool failed = false;
    for (const Shape& base : config.templates) {
      Shape shape = base;
      const double factor = uniform(rng, config.size_min, config.size_max);
      shape.a *= factor;
      shape.b *= factor;
      shape.scale *= factor;
      shape.rotation = config.random_rotation ? uniform(rng, 0.0, 2.0 * kPi) : base.rotation;
      shape.center = Vec2::Zero();
      shape.validate();
      const double radius = shape.bounding_radius();
      bool placed = false;
      for (int draw = 0; draw < kDrawsPerObstacle && !placed; ++draw) {
        const Vec2 c(uniform(rng, config.box.xmin, config.box.xmax), uniform(rng, config.box.ymin, config.box.ymax));
        placed = true;
        for (std::size_t q = 0; q < scene.obstacles.size(); ++q) {
          const double dist = (scene.obstacles[q].center - c).norm();
          if (dist < config.min_center_distance || dist <= radius + radii[q]) {
            placed = false;
            break;
          }
        }
        if (placed) shape.center = c;
      }
      if (!placed) {
        failed = true;
        break;
      }
      scene.obstacles.push_back(shape);
      radii.push_back(radius);
    }
    if (!failed) {
      scene.validate();
      return scene;
    }
  }
  throw ParameterError("scene placement failed: box too small for " + std::to_string(config.templates.size()) +
                       " obstacles at the requested separation");
}

double SceneMesh::max_length() const {
  double h = 0.0;
  for (const auto& m : obstacles) h = std::max(h, m.max_length());
  return h;
}

double SceneMesh::total_perimeter() const {
  double total = 0.0;
  for (const auto& m : obstacles) total += m.perimeter;
  return total;
}

SceneMesh make_scene_mesh(std::vector<ObstacleMesh> obstacles) {
  SceneMesh mesh;
  mesh.obstacles = std::move(obstacles);
  mesh.block_offsets.push_back(0);
  for (const auto& m : mesh.obstacles) {
    mesh.block_offsets.push_back(mesh.block_offsets.back() + static_cast<Index>(m.size()));
  }
  return mesh;
}

SceneMesh mesh_scene(const Scene& scene, double ppw) {
  scene.validate();
  std::vector<ObstacleMesh> meshes;
  meshes.reserve(scene.obstacles.size());
  for (const Shape& shape : scene.obstacles) {
    meshes.push_back(mesh_boundary(shape, scene.k, ppw));
  }
  return make_scene_mesh(std::move(meshes));
}

}  // namespace msbem::geometry
