#pragma once

#include <vector>

#include "msbem/common.hpp"
#include "msbem/geometry.hpp"

namespace msbem::bem {

/// Gauss-Legendre rule mapped to [0, 1]; weights sum to 1.
/// Exact for polynomials of degree <= 2n - 1.
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  int exactness_degree() const { return 2 * static_cast<int>(points.size()) - 1; }
};

QuadratureRule gauss_legendre(int n);

struct AssemblyOptions {
  int far_order = 8;    // panel pairs sharing no node
  int near_order = 16;  // adjacent panels (Duffy at the shared vertex) and self panels
};

enum class OperatorKind { single_layer, double_layer, adjoint_double_layer, mass };

/// Galerkin matrix of one boundary operator on P1 hat functions.
///
/// Sign conventions (outward normals):
///   single_layer          L_ij = <phi_i, G phi_j>
///   double_layer          M_ij = <phi_i, -dG/dn(y) phi_j>
///   adjoint_double_layer  N_ij = <phi_i,  dG/dn(x) phi_j>
///   mass                  I_ij = <phi_i, phi_j>
struct AssembledOperator {
  ComplexMatrix matrix;
  OperatorKind kind = OperatorKind::mass;
  double k = 0.0;
};

AssembledOperator assemble_mass(const geometry::SceneMesh& mesh);
AssembledOperator assemble_single_layer(const geometry::SceneMesh& mesh, double k, const AssemblyOptions& options = {});
AssembledOperator assemble_double_layer(const geometry::SceneMesh& mesh, double k, const AssemblyOptions& options = {});
AssembledOperator assemble_adjoint_double_layer(const geometry::SceneMesh& mesh, double k,
                                                const AssemblyOptions& options = {});

/// L, M, N and the mass matrix from a single pass over panel pairs.
struct BoundaryOperators {
  ComplexMatrix single_layer;
  ComplexMatrix double_layer;
  ComplexMatrix adjoint_double_layer;
  ComplexMatrix mass;
  double k = 0.0;
};

BoundaryOperators assemble_operators(const geometry::SceneMesh& mesh, double k, const AssemblyOptions& options = {});

enum class Layer { single, double_ };

struct PotentialResult {
  ComplexVector values;
  /// Indices of points closer to the boundary than the nearest panel's length.
  std::vector<Index> near_boundary;

  bool warning() const { return !near_boundary.empty(); }
};

/// Single-layer potential int G rho_h, or double-layer potential
/// -int dG/dn(y) lambda_h, at points off the boundary. Panels close to a point
/// are subdivided before Gauss quadrature.
PotentialResult evaluate_potentials(const geometry::SceneMesh& mesh, const ComplexVector& density, double k,
                                    const std::vector<Vec2>& points, Layer layer);

}  // namespace msbem::bem
