#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msbem/bem.hpp"
#include "msbem/common.hpp"
#include "msbem/geometry.hpp"
#include "msbem/linalg.hpp"

namespace msbem::formulations {

enum class Kind { efie, mfie, cfie, bw };

std::string to_string(Kind kind);
Kind kind_from_string(const std::string& name);

inline constexpr Kind kAllKinds[] = {Kind::efie, Kind::mfie, Kind::cfie, Kind::bw};

/// Boundary integral equation choice with its coupling parameters.
/// CFIE needs 0 < alpha < 1 and Im(eta) != 0; BW needs Im(eta_bw) != 0.
struct Formulation {
  Kind kind = Kind::efie;
  double alpha = 0.2;
  Complex eta = 0.0;
  Complex eta_bw = 0.0;

  static Formulation efie() { return {Kind::efie}; }
  static Formulation mfie() { return {Kind::mfie}; }
  static Formulation cfie(double alpha, Complex eta) { return {Kind::cfie, alpha, eta, 0.0}; }
  static Formulation bw(Complex eta_bw) { return {Kind::bw, 0.2, 0.0, eta_bw}; }

  void validate() const;
};

/// Coupling parameters shared by a family of runs. Unset values default to
/// eta = -ik and eta_bw = ik/2.
struct FormulationParams {
  double alpha = 0.2;
  std::optional<Complex> eta;
  std::optional<Complex> eta_bw;

  Formulation make(Kind kind, double k) const;
};

struct IncidentWave {
  double k = 1.0;
  Vec2 beta = Vec2(0.0, 1.0);

  Complex value(const Vec2& x) const;
};

struct IncidentTraces {
  ComplexVector trace;         // u_inc at nodes
  ComplexVector normal_trace;  // du_inc/dn at nodes, averaged node normals
};

IncidentTraces incident_traces(const IncidentWave& wave, const geometry::SceneMesh& mesh);

/// Galerkin load vectors <phi_i, u_inc> and <phi_i, du_inc/dn> integrated
/// panel by panel with the flat-panel normals. These are the right-hand
/// sides used by build_system.
IncidentTraces incident_loads(const IncidentWave& wave, const geometry::SceneMesh& mesh);

/// Galerkin matrix, mass-projected right-hand side and block layout of one
/// formulation.
struct BlockSystem {
  ComplexMatrix a;
  ComplexVector rhs;
  std::vector<Index> block_offsets;
  Formulation formulation;
  geometry::SceneMesh mesh;
  double k = 0.0;

  Index size() const { return a.rows(); }
  std::size_t block_count() const { return block_offsets.size() - 1; }
};

/// EFIE:  L                                  rhs = -<phi, u_inc>
/// MFIE:  I/2 + N                            rhs = -<phi, du_inc/dn>
/// CFIE:  (1 - alpha)(I/2 + N) + alpha eta L  rhs = -<phi, (1 - alpha) du_inc/dn + alpha eta u_inc>
/// BW:    -eta_bw L - M + I/2                rhs = -<phi, u_inc>
/// with I the mass matrix.
BlockSystem build_system(const Formulation& form, const IncidentWave& wave, const geometry::SceneMesh& mesh,
                         const bem::BoundaryOperators& ops);
BlockSystem build_system(const Formulation& form, const geometry::Scene& scene, const geometry::SceneMesh& mesh,
                         const bem::AssemblyOptions& options = {});

/// LU factors of the diagonal blocks, one per obstacle.
struct BlockPreconditioner {
  std::vector<linalg::LuFactors> blocks;
  std::vector<Index> block_offsets;
};

/// Throws NumericalError naming the obstacle whose diagonal block is singular.
BlockPreconditioner single_scattering_preconditioner(const BlockSystem& sys);

/// Blockwise inverse of the diagonal part applied to v.
ComplexVector apply_block_inverse(const BlockPreconditioner& pre, const ComplexVector& v);

/// (diag A)^{-1} A v.
ComplexVector apply_preconditioned(const BlockSystem& sys, const BlockPreconditioner& pre, const ComplexVector& v);

/// Explicit (diag A)^{-1} A.
ComplexMatrix preconditioned_matrix(const BlockSystem& sys, const BlockPreconditioner& pre);

struct SolveResult {
  ComplexVector density;
  linalg::GmresReport report;
};

SolveResult solve(const BlockSystem& sys, const BlockPreconditioner* pre, int restart, double tol, int maxiter);

struct FieldResult {
  ComplexVector values;
  std::vector<Index> near_boundary;
};

/// Scattered field from a solved density: single-layer potential for the
/// direct equations, -eta_bw (single layer) - (double layer) for BW.
FieldResult scattered_field(const BlockSystem& sys, const ComplexVector& density, const std::vector<Vec2>& points);

}  // namespace msbem::formulations
