#include "msbem/formulations.hpp"

#include <cctype>
#include <cmath>

namespace msbem::formulations {

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::efie:
      return "EFIE";
    case Kind::mfie:
      return "MFIE";
    case Kind::cfie:
      return "CFIE";
    case Kind::bw:
      return "BW";
  }
  return "unknown";
}

Kind kind_from_string(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "efie") return Kind::efie;
  if (lower == "mfie") return Kind::mfie;
  if (lower == "cfie") return Kind::cfie;
  if (lower == "bw") return Kind::bw;
  throw ParameterError("unknown formulation '" + name + "'");
}

void Formulation::validate() const {
  if (kind == Kind::cfie) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("CFIE requires 0 < alpha < 1");
    if (eta.imag() == 0.0 || !std::isfinite(std::abs(eta))) throw ParameterError("CFIE requires Im(eta) != 0");
  }
  if (kind == Kind::bw && (eta_bw.imag() == 0.0 || !std::isfinite(std::abs(eta_bw)))) {
    throw ParameterError("Brakhage-Werner requires Im(eta_bw) != 0");
  }
}

Formulation FormulationParams::make(Kind kind, double k) const {
  Formulation f;
  f.kind = kind;
  f.alpha = alpha;
  f.eta = eta.value_or(-kI * k);
  f.eta_bw = eta_bw.value_or(0.5 * kI * k);
  f.validate();
  return f;
}

Complex IncidentWave::value(const Vec2& x) const { return std::exp(kI * (k * beta.dot(x))); }

IncidentTraces incident_traces(const IncidentWave& wave, const geometry::SceneMesh& mesh) {
  IncidentTraces out;
  out.trace.resize(mesh.size());
  out.normal_trace.resize(mesh.size());
  for (std::size_t p = 0; p < mesh.obstacles.size(); ++p) {
    const auto& obs = mesh.obstacles[p];
    const std::vector<Vec2> normals = obs.node_normals();
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const Index g = mesh.block_offsets[p] + static_cast<Index>(i);
      const Complex u = wave.value(obs.nodes[i]);
      out.trace[g] = u;
      out.normal_trace[g] = kI * wave.k * wave.beta.dot(normals[i]) * u;
    }
  }
  return out;
}

IncidentTraces incident_loads(const IncidentWave& wave, const geometry::SceneMesh& mesh) {
  const bem::QuadratureRule rule = bem::gauss_legendre(8);
  IncidentTraces out;
  out.trace = ComplexVector::Zero(mesh.size());
  out.normal_trace = ComplexVector::Zero(mesh.size());
  for (std::size_t p = 0; p < mesh.obstacles.size(); ++p) {
    const auto& obs = mesh.obstacles[p];
    const Index offset = mesh.block_offsets[p];
    for (std::size_t s = 0; s < obs.segments.size(); ++s) {
      const Index i0 = offset + obs.segments[s][0];
      const Index i1 = offset + obs.segments[s][1];
      const Vec2& a = obs.nodes[obs.segments[s][0]];
      const Vec2 dir = obs.nodes[obs.segments[s][1]] - a;
      const Complex dn = kI * wave.k * wave.beta.dot(obs.normals[s]);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double t = rule.points[q];
        const Complex u = wave.value(a + t * dir) * (rule.weights[q] * obs.lengths[s]);
        out.trace[i0] += (1.0 - t) * u;
        out.trace[i1] += t * u;
        out.normal_trace[i0] += (1.0 - t) * dn * u;
        out.normal_trace[i1] += t * dn * u;
      }
    }
  }
  return out;
}

BlockSystem build_system(const Formulation& form, const IncidentWave& wave, const geometry::SceneMesh& mesh,
                         const bem::BoundaryOperators& ops) {
  form.validate();
  if (ops.single_layer.rows() != mesh.size()) throw DimensionError("operators do not match mesh");
  const IncidentTraces loads = incident_loads(wave, mesh);
  const ComplexMatrix& mass = ops.mass;

  BlockSystem sys;
  sys.formulation = form;
  sys.block_offsets = mesh.block_offsets;
  sys.mesh = mesh;
  sys.k = wave.k;
  switch (form.kind) {
    case Kind::efie:
      sys.a = ops.single_layer;
      sys.rhs = -loads.trace;
      break;
    case Kind::mfie:
      sys.a = 0.5 * mass + ops.adjoint_double_layer;
      sys.rhs = -loads.normal_trace;
      break;
    case Kind::cfie: {
      const double w = 1.0 - form.alpha;
      const Complex c = form.alpha * form.eta;
      sys.a = w * (0.5 * mass + ops.adjoint_double_layer) + c * ops.single_layer;
      sys.rhs = -(w * loads.normal_trace + c * loads.trace);
      break;
    }
    case Kind::bw:
      sys.a = -form.eta_bw * ops.single_layer - ops.double_layer + 0.5 * mass;
      sys.rhs = -loads.trace;
      break;
  }
  return sys;
}

BlockSystem build_system(const Formulation& form, const geometry::Scene& scene, const geometry::SceneMesh& mesh,
                         const bem::AssemblyOptions& options) {
  form.validate();
  const bem::BoundaryOperators ops = bem::assemble_operators(mesh, scene.k, options);
  return build_system(form, IncidentWave{scene.k, scene.beta}, mesh, ops);
}

BlockPreconditioner single_scattering_preconditioner(const BlockSystem& sys) {
  BlockPreconditioner pre;
  pre.block_offsets = sys.block_offsets;
  for (std::size_t p = 0; p + 1 < sys.block_offsets.size(); ++p) {
    const Index start = sys.block_offsets[p];
    const Index len = sys.block_offsets[p + 1] - start;
    try {
      pre.blocks.push_back(linalg::lu_factor(sys.a.block(start, start, len, len)));
    } catch (const NumericalError& e) {
      throw NumericalError("diagonal block of obstacle " + std::to_string(p) + " (" + to_string(sys.formulation.kind) +
                           ") is singular: irregular frequency or bad mesh; " + e.what());
    }
  }
  return pre;
}

ComplexVector apply_block_inverse(const BlockPreconditioner& pre, const ComplexVector& v) {
  if (pre.block_offsets.empty() || v.size() != pre.block_offsets.back()) {
    throw DimensionError("preconditioner size mismatch");
  }
  ComplexVector out(v.size());
  for (std::size_t p = 0; p < pre.blocks.size(); ++p) {
    const Index start = pre.block_offsets[p];
    const Index len = pre.block_offsets[p + 1] - start;
    out.segment(start, len) = linalg::lu_solve(pre.blocks[p], ComplexVector(v.segment(start, len)));
  }
  return out;
}

ComplexVector apply_preconditioned(const BlockSystem& sys, const BlockPreconditioner& pre, const ComplexVector& v) {
  if (v.size() != sys.size()) throw DimensionError("apply_preconditioned: vector size mismatch");
  return apply_block_inverse(pre, sys.a * v);
}

ComplexMatrix preconditioned_matrix(const BlockSystem& sys, const BlockPreconditioner& pre) {
  if (pre.block_offsets != sys.block_offsets) throw DimensionError("preconditioner layout does not match system");
  ComplexMatrix out(sys.size(), sys.size());
  for (std::size_t p = 0; p < pre.blocks.size(); ++p) {
    const Index start = pre.block_offsets[p];
    const Index len = pre.block_offsets[p + 1] - start;
    out.middleRows(start, len) = linalg::lu_solve(pre.blocks[p], ComplexMatrix(sys.a.middleRows(start, len)));
  }
  return out;
}

SolveResult solve(const BlockSystem& sys, const BlockPreconditioner* pre, int restart, double tol, int maxiter) {
  const linalg::LinearOperator apply = [&sys](const ComplexVector& v) -> ComplexVector { return sys.a * v; };
  std::optional<linalg::LinearOperator> left;
  if (pre != nullptr) {
    left = [pre](const ComplexVector& v) { return apply_block_inverse(*pre, v); };
  }
  linalg::GmresResult r = linalg::gmres(apply, sys.rhs, restart, tol, maxiter, left);
  return {std::move(r.x), std::move(r.report)};
}

FieldResult scattered_field(const BlockSystem& sys, const ComplexVector& density, const std::vector<Vec2>& points) {
  using bem::Layer;
  if (density.size() != sys.size()) throw DimensionError("density size does not match system");
  FieldResult out;
  bem::PotentialResult single = bem::evaluate_potentials(sys.mesh, density, sys.k, points, Layer::single);
  out.near_boundary = single.near_boundary;
  if (sys.formulation.kind != Kind::bw) {
    out.values = std::move(single.values);
    return out;
  }
  const bem::PotentialResult dbl = bem::evaluate_potentials(sys.mesh, density, sys.k, points, Layer::double_);
  out.values = -sys.formulation.eta_bw * single.values - dbl.values;
  return out;
}

}  // namespace msbem::formulations
