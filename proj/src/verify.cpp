#include "msbem/verify.hpp"

#include "msbem/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace msbem::verify {

using formulations::BlockSystem;

PreparedSystems prepare(const geometry::Scene& scene, const geometry::SceneMesh& mesh, const ExperimentParams& params) {
  const bem::BoundaryOperators ops = bem::assemble_operators(mesh, scene.k, params.assembly);
  const formulations::IncidentWave wave{scene.k, scene.beta};
  PreparedSystems out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Kind kind = formulations::kAllKinds[i];
    out.systems[i] = formulations::build_system(params.formulation.make(kind, scene.k), wave, mesh, ops);
    out.preconditioners[i] = formulations::single_scattering_preconditioner(out.systems[i]);
    out.preconditioned[i] = formulations::preconditioned_matrix(out.systems[i], out.preconditioners[i]);
  }
  return out;
}

bool EquivalenceReport::pass() const {
  return std::all_of(comparisons.begin(), comparisons.end(), [](const Comparison& c) { return c.pass; });
}

const Comparison& EquivalenceReport::at(const std::string& name) const {
  for (const Comparison& c : comparisons) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no comparison named " + name);
}

double relative_difference(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& denominator) {
  return linalg::inf_norm(linalg::matsub(a, b)) / linalg::inf_norm(denominator);
}

namespace {

Comparison compare(std::string name, double difference, double threshold) {
  return {std::move(name), difference, threshold, difference <= threshold};
}

}  // namespace

EquivalenceReport check_direct_equality(const PreparedSystems& prepared, const Thresholds& thresholds) {
  const ComplexMatrix& pe = prepared.precond_matrix(Kind::efie);
  const ComplexMatrix& pm = prepared.precond_matrix(Kind::mfie);
  const ComplexMatrix& pc = prepared.precond_matrix(Kind::cfie);
  EquivalenceReport report;
  report.comparisons.push_back(compare("EFIE-MFIE", relative_difference(pe, pm, pe), thresholds.efie_mfie));
  report.comparisons.push_back(compare("MFIE-CFIE", relative_difference(pm, pc, pm), thresholds.mfie_cfie));
  report.comparisons.push_back(compare("EFIE-CFIE", relative_difference(pe, pc, pc), thresholds.efie_cfie));
  return report;
}

EquivalenceReport check_direct_equality(const geometry::Scene& scene, const geometry::SceneMesh& mesh,
                                    const ExperimentParams& params, const Thresholds& thresholds) {
  return check_direct_equality(prepare(scene, mesh, params), thresholds);
}

EquivalenceReport check_bw_similarity(const PreparedSystems& prepared, const Thresholds& thresholds) {
  const BlockSystem& efie = prepared.system(Kind::efie);
  const BlockSystem& bw = prepared.system(Kind::bw);
  linalg::LuFactors efie_lu;
  try {
    efie_lu = linalg::lu_factor(efie.a);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("EFIE matrix is singular (irregular Dirichlet frequency): ") + e.what());
  }
  const linalg::LuFactors bw_lu = linalg::lu_factor(bw.a);
  const ComplexMatrix transform = linalg::lu_solve(efie_lu, bw.a);          // A_E^{-1} A_BW
  const ComplexMatrix transform_inv = linalg::lu_solve(bw_lu, efie.a);      // A_BW^{-1} A_E
  const ComplexMatrix& p_bw = prepared.precond_matrix(Kind::bw);
  const ComplexMatrix similar = linalg::matmul(linalg::matmul(transform, p_bw), transform_inv);
  EquivalenceReport report;
  report.comparisons.push_back(compare(
      "BW-similarity", relative_difference(prepared.precond_matrix(Kind::efie), similar, p_bw), thresholds.bw_similarity));
  return report;
}

EquivalenceReport check_bw_similarity(const geometry::Scene& scene, const geometry::SceneMesh& mesh,
                                  const ExperimentParams& params, const Thresholds& thresholds) {
  return check_bw_similarity(prepare(scene, mesh, params), thresholds);
}

Matching match_spectra(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw DimensionError("match_spectra: multisets differ in size");
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t i, std::size_t j) { return std::abs(a[i]) > std::abs(a[j]); });
  Matching m;
  m.permutation.assign(a.size(), -1);
  std::vector<bool> used(b.size(), false);
  for (std::size_t i : order) {
    std::size_t best = b.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(a[i] - b[j]);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    used[best] = true;
    m.permutation[i] = static_cast<Index>(best);
    m.max_relative_error = std::max(m.max_relative_error, best_dist / std::abs(a[i]));
  }
  return m;
}

SpectrumReport check_spectra(const PreparedSystems& prepared, const Thresholds& thresholds) {
  SpectrumReport report;
  report.threshold = thresholds.spectrum;
  for (std::size_t i = 0; i < 4; ++i) report.spectra[i] = linalg::eigenvalues(prepared.preconditioned[i]);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      Matching m = match_spectra(report.spectra[i], report.spectra[j]);
      report.max_relative_error = std::max(report.max_relative_error, m.max_relative_error);
      if (i == 0) report.matchings[j - 1] = std::move(m);
    }
  }
  const auto& efie = report.spectra[0];
  const auto near_one = std::count_if(efie.begin(), efie.end(), [](Complex z) { return std::abs(z - 1.0) <= 0.5; });
  report.cluster_fraction = efie.empty() ? 0.0 : static_cast<double>(near_one) / static_cast<double>(efie.size());
  report.pass = report.max_relative_error <= report.threshold;
  return report;
}

const ConvergenceRun& ConvergenceReport::run(Kind kind, bool preconditioned) const {
  for (const ConvergenceRun& r : runs) {
    if (r.kind == kind && r.preconditioned == preconditioned) return r;
  }
  throw std::out_of_range("no such convergence run");
}

ConvergenceReport convergence_histories(const PreparedSystems& prepared, int restart, double tol, int maxiter) {
  ConvergenceReport report;
  report.restart = restart;
  report.tol = tol;
  report.maxiter = maxiter;
  for (bool precond : {false, true}) {
    for (std::size_t i = 0; i < 4; ++i) {
      const formulations::BlockPreconditioner* pre = precond ? &prepared.preconditioners[i] : nullptr;
      formulations::SolveResult r = formulations::solve(prepared.systems[i], pre, restart, tol, maxiter);
      report.runs.push_back({formulations::kAllKinds[i], precond, std::move(r.report)});
    }
  }
  return report;
}


ConvergenceChecks evaluate_convergence(const ConvergenceReport& report) {
  ConvergenceChecks c;
  c.min_preconditioned = std::numeric_limits<int>::max();
  c.all_preconditioned_converged = true;
  for (Kind kind : formulations::kAllKinds) {
    const ConvergenceRun& r = report.run(kind, true);
    c.min_preconditioned = std::min(c.min_preconditioned, r.report.iterations);
    c.max_preconditioned = std::max(c.max_preconditioned, r.report.iterations);
    c.all_preconditioned_converged = c.all_preconditioned_converged && r.report.converged;
  }
  c.preconditioned_counts_agree = c.max_preconditioned - c.min_preconditioned <= 1;
  const auto faster = [&report](Kind kind) {
    const ConvergenceRun& plain = report.run(kind, false);
    const ConvergenceRun& pre = report.run(kind, true);
    // A plain run that never converged counts as slower.
    return pre.report.converged && (!plain.report.converged || pre.report.iterations < plain.report.iterations);
  };
  c.cfie_accelerated = faster(Kind::cfie);
  c.bw_accelerated = faster(Kind::bw);
  const auto& ref = report.run(Kind::efie, true).report.residual_history;
  for (Kind kind : formulations::kAllKinds) {
    const auto& h = report.run(kind, true).report.residual_history;
    double& worst = kind == Kind::bw ? c.bw_history_deviation : c.max_history_deviation;
    for (std::size_t i = 0; i < std::min(h.size(), ref.size()); ++i) {
      if (ref[i] > 0.0) worst = std::max(worst, std::abs(h[i] - ref[i]) / ref[i]);
    }
  }
  return c;
}

RefinementCheck compare_refinement(const EquivalenceReport& coarse, const EquivalenceReport& fine, double direct_factor) {
  RefinementCheck check;
  check.pass = true;
  for (const Comparison& c : coarse.comparisons) {
    const Comparison& f = fine.at(c.name);
    const double required = c.name == "BW-similarity" ? 1.0 : direct_factor;
    const double ratio = f.difference > 0.0 ? c.difference / f.difference : std::numeric_limits<double>::infinity();
    check.names.push_back(c.name);
    check.coarse.push_back(c.difference);
    check.fine.push_back(f.difference);
    check.ratio.push_back(ratio);
    check.required.push_back(required);
    // BW only has to decrease; the direct pairs must drop by the factor.
    check.pass = check.pass && (required == 1.0 ? ratio > 1.0 : ratio >= required);
  }
  return check;
}

std::vector<DiskResult> validate_disk(const DiskCase& disk, const ExperimentParams& params) {
  if (!(disk.eval_radius > disk.radius) || disk.eval_points < 1) {
    throw ParameterError("validate_disk: evaluation circle must lie outside the disk");
  }
  geometry::Scene scene;
  scene.k = disk.k;
  scene.beta = disk.beta;
  scene.obstacles = {geometry::Shape::ellipse(disk.radius, disk.radius)};
  scene.box = {-disk.radius, disk.radius, -disk.radius, disk.radius};
  scene.validate();
  const geometry::SceneMesh mesh = geometry::mesh_scene(scene, disk.ppw);
  const bem::BoundaryOperators ops = bem::assemble_operators(mesh, disk.k, params.assembly);

  std::vector<Vec2> points;
  for (int i = 0; i < disk.eval_points; ++i) {
    const double t = 2.0 * kPi * i / disk.eval_points;
    points.push_back(disk.eval_radius * Vec2(std::cos(t), std::sin(t)));
  }
  analytic::MieConfig cfg;
  cfg.k = disk.k;
  cfg.radius = disk.radius;
  cfg.beta = disk.beta;
  const ComplexVector reference = analytic::mie_scattered(cfg, points);

  std::vector<DiskResult> out;
  for (Kind kind : formulations::kAllKinds) {
    const auto sys = formulations::build_system(params.formulation.make(kind, disk.k),
                                                formulations::IncidentWave{disk.k, disk.beta}, mesh, ops);
    const auto pre = formulations::single_scattering_preconditioner(sys);
    const auto sol = formulations::solve(sys, &pre, disk.restart, disk.tol, disk.maxiter);
    const auto field = formulations::scattered_field(sys, sol.density, points);
    DiskResult r;
    r.kind = kind;
    r.unknowns = sys.size();
    r.report = sol.report;
    r.relative_l2_error = (field.values - reference).norm() / reference.norm();
    r.pass = sol.report.converged && r.relative_l2_error <= disk.threshold;
    out.push_back(r);
  }
  return out;
}

}  // namespace msbem::verify

