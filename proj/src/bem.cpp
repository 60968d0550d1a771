#include "msbem/bem.hpp"

#include <array>
#include <cmath>
#include <map>

#include "msbem/specfun.hpp"

namespace msbem::bem {

namespace {

using geometry::SceneMesh;
using Local = std::array<std::array<Complex, 2>, 2>;

struct Panel {
  Vec2 start;
  Vec2 dir;  // end - start
  Vec2 normal;
  double length;
  std::array<Index, 2> nodes;
  std::size_t obstacle;
  int local;
  int count;  // panels on this obstacle
};

std::vector<Panel> collect_panels(const SceneMesh& mesh) {
  std::vector<Panel> panels;
  for (std::size_t p = 0; p < mesh.obstacles.size(); ++p) {
    const auto& obs = mesh.obstacles[p];
    const Index offset = mesh.block_offsets[p];
    const int count = static_cast<int>(obs.segments.size());
    for (int s = 0; s < count; ++s) {
      const auto& seg = obs.segments[s];
      const Vec2& a = obs.nodes[seg[0]];
      const Vec2& b = obs.nodes[seg[1]];
      panels.push_back({a, b - a, obs.normals[s], obs.lengths[s], {offset + seg[0], offset + seg[1]}, p, s, count});
    }
  }
  return panels;
}

bool adjacent(const Panel& a, const Panel& b) {
  if (a.obstacle != b.obstacle) return false;
  return (a.local + 1) % a.count == b.local || (b.local + 1) % b.count == a.local;
}

bool a_ends_at_b(const Panel& a, const Panel& b) { return a.nodes[1] == b.nodes[0]; }

const QuadratureRule& cached_rule(int n) {
  static thread_local std::map<int, QuadratureRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

void scatter(ComplexMatrix& m, const Panel& test, const Panel& trial, const Local& local) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      m(test.nodes[i], trial.nodes[j]) += local[i][j];
    }
  }
}

struct PairBlocks {
  // Contributions (test a, trial b) and (test b, trial a), indices [test basis][trial basis].
  Local l_ab{}, l_ba{}, m_ab{}, m_ba{}, n_ab{}, n_ba{};
};

struct PairNode {
  double s, t, weight;  // parameters on panels a and b, weight on the unit square
};

std::vector<PairNode> tensor_nodes(const QuadratureRule& rule) {
  std::vector<PairNode> nodes;
  nodes.reserve(rule.size() * rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (std::size_t r = 0; r < rule.size(); ++r) {
      nodes.push_back({rule.points[q], rule.points[r], rule.weights[q] * rule.weights[r]});
    }
  }
  return nodes;
}

// Duffy rule for two panels meeting at one vertex: split the unit square
// (distances u, v from the vertex) into two triangles collapsed onto the
// vertex, which cancels the 1/r behaviour of the kernels there.
std::vector<PairNode> vertex_nodes(const QuadratureRule& rule, bool a_vertex_at_end, bool b_vertex_at_end) {
  std::vector<PairNode> nodes;
  nodes.reserve(2 * rule.size() * rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double u = rule.points[q];
    for (std::size_t r = 0; r < rule.size(); ++r) {
      const double w = rule.weights[q] * rule.weights[r] * u;
      const double z = u * rule.points[r];
      for (const auto& [da, db] : {std::pair{u, z}, std::pair{z, u}}) {
        nodes.push_back({a_vertex_at_end ? 1.0 - da : da, b_vertex_at_end ? 1.0 - db : db, w});
      }
    }
  }
  return nodes;
}

PairBlocks integrate_pair(const Panel& a, const Panel& b, double k, const std::vector<PairNode>& nodes) {
  PairBlocks out;
  const Complex ik4 = 0.25 * kI * k;
  const double area = a.length * b.length;
  for (const PairNode& node : nodes) {
    const Vec2 x = a.start + node.s * a.dir;
    const Vec2 y = b.start + node.t * b.dir;
    const double fa[2] = {1.0 - node.s, node.s};
    const double fb[2] = {1.0 - node.t, node.t};
    const Vec2 d = x - y;
    const double dist = d.norm();
    const double w = node.weight * area;
    const specfun::Hankel01 h = specfun::hankel01(k * dist);
    const Complex g0 = 0.25 * kI * h.h0 * w;
    const Complex g1 = ik4 * h.h1 * (w / dist);
    const Complex dny_b = g1 * d.dot(b.normal);   // dG/dn(y) at y on b
    const Complex dnx_a = -g1 * d.dot(a.normal);  // dG/dn(x) at x on a
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double phi = fa[i] * fb[j];
        out.l_ab[i][j] += phi * g0;
        out.m_ab[i][j] -= phi * dny_b;
        out.n_ab[i][j] += phi * dnx_a;
        // Roles swapped: test point y on b, trial point x on a.
        out.l_ba[j][i] += phi * g0;
        out.m_ba[j][i] -= phi * dnx_a;  // -dG(y,x)/dn(x) = -dG(x,y)/dn(x)
        out.n_ba[j][i] += phi * dny_b;  //  dG(y,x)/dn(y) =  dG(x,y)/dn(y)
      }
    }
  }
  return out;
}

// Self-panel single layer: -ln(r)/(2 pi) integrated in closed form against
// P1 basis products, the continuous remainder by tensor Gauss.
Local self_single_layer(const Panel& a, double k, const QuadratureRule& rule) {
  // int_0^1 int_0^1 f_i(s) f_j(t) ln|s - t| ds dt for f_0 = 1 - s, f_1 = s.
  static constexpr double kLogMoment[2][2] = {{-7.0 / 16.0, -5.0 / 16.0}, {-5.0 / 16.0, -7.0 / 16.0}};
  const double len = a.length;
  Local out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out[i][j] = -(len * len) / (2.0 * kPi) * (0.25 * std::log(len) + kLogMoment[i][j]);
    }
  }
  const std::size_t g = rule.size();
  for (std::size_t q = 0; q < g; ++q) {
    const double s = rule.points[q];
    const double fa[2] = {1.0 - s, s};
    for (std::size_t r = 0; r < g; ++r) {
      const double t = rule.points[r];
      const double fb[2] = {1.0 - t, t};
      const Complex v = specfun::green_regular_part(k, len * std::abs(s - t)) *
                        (rule.weights[q] * rule.weights[r] * len * len);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          out[i][j] += fa[i] * fb[j] * v;
        }
      }
    }
  }
  return out;
}

void check_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ParameterError("wavenumber must be positive");
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw ParameterError("quadrature order must be >= 1");
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] -> [0, 1]; weights halve.
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n == 1) {
    rule.points[0] = 0.5;
    rule.weights[0] = 1.0;
  }
  return rule;
}

AssembledOperator assemble_mass(const SceneMesh& mesh) {
  const Index n = mesh.size();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (const Panel& p : collect_panels(mesh)) {
    const double diag = p.length / 3.0;
    const double off = p.length / 6.0;
    m(p.nodes[0], p.nodes[0]) += diag;
    m(p.nodes[1], p.nodes[1]) += diag;
    m(p.nodes[0], p.nodes[1]) += off;
    m(p.nodes[1], p.nodes[0]) += off;
  }
  return {std::move(m), OperatorKind::mass, 0.0};
}

BoundaryOperators assemble_operators(const SceneMesh& mesh, double k, const AssemblyOptions& options) {
  check_k(k);
  const Index n = mesh.size();
  BoundaryOperators ops;
  ops.k = k;
  ops.single_layer = ComplexMatrix::Zero(n, n);
  ops.double_layer = ComplexMatrix::Zero(n, n);
  ops.adjoint_double_layer = ComplexMatrix::Zero(n, n);
  ops.mass = assemble_mass(mesh).matrix;

  const std::vector<Panel> panels = collect_panels(mesh);
  const QuadratureRule& near = cached_rule(options.near_order);
  const std::vector<PairNode> far_nodes = tensor_nodes(cached_rule(options.far_order));
  // a -> b (a's end is b's start) and b -> a (b's end is a's start).
  const std::vector<PairNode> forward_nodes = vertex_nodes(near, true, false);
  const std::vector<PairNode> backward_nodes = vertex_nodes(near, false, true);
  for (std::size_t a = 0; a < panels.size(); ++a) {
    // Flat panel: (x - y).n vanishes, so M and N get nothing from the self pair.
    scatter(ops.single_layer, panels[a], panels[a], self_single_layer(panels[a], k, near));
    for (std::size_t b = a + 1; b < panels.size(); ++b) {
      const std::vector<PairNode>* nodes = &far_nodes;
      if (adjacent(panels[a], panels[b])) {
        // A 2-panel loop shares both vertices; the forward vertex is used.
        nodes = a_ends_at_b(panels[a], panels[b]) ? &forward_nodes : &backward_nodes;
      }
      const PairBlocks blocks = integrate_pair(panels[a], panels[b], k, *nodes);
      scatter(ops.single_layer, panels[a], panels[b], blocks.l_ab);
      scatter(ops.single_layer, panels[b], panels[a], blocks.l_ba);
      scatter(ops.double_layer, panels[a], panels[b], blocks.m_ab);
      scatter(ops.double_layer, panels[b], panels[a], blocks.m_ba);
      scatter(ops.adjoint_double_layer, panels[a], panels[b], blocks.n_ab);
      scatter(ops.adjoint_double_layer, panels[b], panels[a], blocks.n_ba);
    }
  }
  return ops;
}

AssembledOperator assemble_single_layer(const SceneMesh& mesh, double k, const AssemblyOptions& options) {
  return {assemble_operators(mesh, k, options).single_layer, OperatorKind::single_layer, k};
}

AssembledOperator assemble_double_layer(const SceneMesh& mesh, double k, const AssemblyOptions& options) {
  return {assemble_operators(mesh, k, options).double_layer, OperatorKind::double_layer, k};
}

AssembledOperator assemble_adjoint_double_layer(const SceneMesh& mesh, double k, const AssemblyOptions& options) {
  return {assemble_operators(mesh, k, options).adjoint_double_layer, OperatorKind::adjoint_double_layer, k};
}

namespace {

double distance_to_segment(const Vec2& x, const Vec2& start, const Vec2& dir) {
  const double t = std::clamp((x - start).dot(dir) / dir.squaredNorm(), 0.0, 1.0);
  return (x - (start + t * dir)).norm();
}

// Integrates kernel * (c0 (1 - t) + c1 t) over t in [t0, t1] of the panel,
// bisecting while the point is close relative to the piece length.
Complex integrate_panel(const Panel& p, const Vec2& x, double k, Complex c0, Complex c1, Layer layer, double t0,
                        double t1, int depth) {
  const double piece = (t1 - t0) * p.length;
  const Vec2 start = p.start + t0 * p.dir;
  const Vec2 dir = (t1 - t0) * p.dir;
  if (depth < 12 && distance_to_segment(x, start, dir) < 2.0 * piece) {
    const double mid = 0.5 * (t0 + t1);
    return integrate_panel(p, x, k, c0, c1, layer, t0, mid, depth + 1) +
           integrate_panel(p, x, k, c0, c1, layer, mid, t1, depth + 1);
  }
  const QuadratureRule& rule = cached_rule(8);
  Complex sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double t = t0 + (t1 - t0) * rule.points[q];
    const Vec2 y = p.start + t * p.dir;
    const Complex density = c0 * (1.0 - t) + c1 * t;
    const Complex kernel =
        layer == Layer::single ? specfun::green(k, x, y) : -specfun::green_dny(k, x, y, p.normal);
    sum += rule.weights[q] * kernel * density;
  }
  return sum * piece;
}

}  // namespace

PotentialResult evaluate_potentials(const SceneMesh& mesh, const ComplexVector& density, double k,
                                    const std::vector<Vec2>& points, Layer layer) {
  check_k(k);
  if (density.size() != mesh.size()) throw DimensionError("density size does not match mesh");
  const std::vector<Panel> panels = collect_panels(mesh);
  PotentialResult result;
  result.values = ComplexVector::Zero(static_cast<Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec2& x = points[i];
    Complex sum = 0.0;
    bool near = false;
    for (const Panel& p : panels) {
      if (distance_to_segment(x, p.start, p.dir) < p.length) near = true;
      sum += integrate_panel(p, x, k, density[p.nodes[0]], density[p.nodes[1]], layer, 0.0, 1.0, 0);
    }
    result.values[static_cast<Index>(i)] = sum;
    if (near) result.near_boundary.push_back(static_cast<Index>(i));
  }
  return result;
}

}  // namespace msbem::bem
