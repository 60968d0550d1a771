#pragma once

#include <array>
#include <string>
#include <vector>

#include "msbem/formulations.hpp"

namespace msbem::verify {

using formulations::Kind;

struct ExperimentParams {
  formulations::FormulationParams formulation;
  bem::AssemblyOptions assembly;
};

/// The four systems of one scene with their block preconditioners and the
/// explicit preconditioned matrices, indexed in kAllKinds order.
struct PreparedSystems {
  std::array<formulations::BlockSystem, 4> systems;
  std::array<formulations::BlockPreconditioner, 4> preconditioners;
  std::array<ComplexMatrix, 4> preconditioned;

  const formulations::BlockSystem& system(Kind kind) const { return systems[static_cast<int>(kind)]; }
  const ComplexMatrix& precond_matrix(Kind kind) const { return preconditioned[static_cast<int>(kind)]; }
};

PreparedSystems prepare(const geometry::Scene& scene, const geometry::SceneMesh& mesh, const ExperimentParams& params);

/// Bounds for the three pairwise direct-equation differences and the BW one.
struct Thresholds {
  double efie_mfie = 5e-2;
  double mfie_cfie = 5e-2;
  double efie_cfie = 5e-2;
  double bw_similarity = 1e-2;
  double spectrum = 3e-2;
};

struct Comparison {
  std::string name;
  double difference = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct EquivalenceReport {
  std::vector<Comparison> comparisons;

  bool pass() const;
  /// Throws std::out_of_range for an unknown name.
  const Comparison& at(const std::string& name) const;
};

/// |a - b|_inf / |denominator|_inf
double relative_difference(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& denominator);

/// Pairwise differences of the preconditioned EFIE, MFIE and CFIE matrices:
/// "EFIE-MFIE" over |P_EFIE|, "MFIE-CFIE" over |P_MFIE|, "EFIE-CFIE" over |P_CFIE|.
EquivalenceReport check_direct_equality(const PreparedSystems& prepared, const Thresholds& thresholds);
EquivalenceReport check_direct_equality(const geometry::Scene& scene, const geometry::SceneMesh& mesh,
                                    const ExperimentParams& params, const Thresholds& thresholds);

/// With T = A_EFIE^{-1} A_BW, compares P_EFIE against T P_BW T^{-1},
/// normalized by |P_BW|. Reported as "BW-similarity".
EquivalenceReport check_bw_similarity(const PreparedSystems& prepared, const Thresholds& thresholds);
EquivalenceReport check_bw_similarity(const geometry::Scene& scene, const geometry::SceneMesh& mesh,
                                  const ExperimentParams& params, const Thresholds& thresholds);

struct Matching {
  std::vector<Index> permutation;  // permutation[i] = index in b matched to a[i]
  double max_relative_error = 0.0;
};

/// Greedy nearest-neighbour matching, a visited by descending magnitude;
/// error |a_i - b_j| / |a_i|.
Matching match_spectra(const std::vector<Complex>& a, const std::vector<Complex>& b);

struct SpectrumReport {
  std::array<std::vector<Complex>, 4> spectra;
  /// Matchings of EFIE against MFIE, CFIE, BW (in that order).
  std::array<Matching, 3> matchings;
  double max_relative_error = 0.0;  // over all six pairs
  double threshold = 0.0;
  /// Share of eigenvalues within 0.5 of 1 (EFIE spectrum).
  double cluster_fraction = 0.0;
  bool pass = false;
};

SpectrumReport check_spectra(const PreparedSystems& prepared, const Thresholds& thresholds);

struct ConvergenceRun {
  Kind kind = Kind::efie;
  bool preconditioned = false;
  linalg::GmresReport report;
};

struct ConvergenceReport {
  std::vector<ConvergenceRun> runs;  // plain then preconditioned, kAllKinds order
  int restart = 50;
  double tol = 1e-6;
  int maxiter = 0;

  const ConvergenceRun& run(Kind kind, bool preconditioned) const;
};

ConvergenceReport convergence_histories(const PreparedSystems& prepared, int restart, double tol, int maxiter);


/// Pass/fail view of the GMRES comparison: preconditioned iteration counts
/// agree within +-1, and preconditioning cuts CFIE and BW iterations.
struct ConvergenceChecks {
  int min_preconditioned = 0;
  int max_preconditioned = 0;
  bool preconditioned_counts_agree = false;
  bool cfie_accelerated = false;
  bool bw_accelerated = false;
  bool all_preconditioned_converged = false;
  // largest |h - h_EFIE| / h_EFIE over the common preconditioned history,
  // MFIE and CFIE only. BW is kept apart: its residual lives in a different
  // basis (the similarity transform), so it tracks less tightly. Reported
  // only, not part of pass().
  double max_history_deviation = 0.0;
  double bw_history_deviation = 0.0;

  bool pass() const {
    return preconditioned_counts_agree && cfie_accelerated && bw_accelerated && all_preconditioned_converged;
  }
};

ConvergenceChecks evaluate_convergence(const ConvergenceReport& report);

/// Ratio coarse/fine of each named difference; pass when every ratio reaches
/// its required factor (1.5 for the direct pairs, > 1 for BW).
struct RefinementCheck {
  std::vector<std::string> names;
  std::vector<double> coarse, fine, ratio, required;
  bool pass = false;
};

RefinementCheck compare_refinement(const EquivalenceReport& coarse, const EquivalenceReport& fine, double direct_factor = 1.5);

struct DiskCase {
  double k = 5.0;
  double radius = 1.0;
  double ppw = 15.0;
  double eval_radius = 3.0;
  int eval_points = 64;
  Vec2 beta = Vec2(0.0, 1.0);
  int restart = 50;
  double tol = 1e-10;
  int maxiter = 500;
  double threshold = 1e-2;
};

struct DiskResult {
  Kind kind = Kind::efie;
  Index unknowns = 0;
  linalg::GmresReport report;
  double relative_l2_error = 0.0;
  bool pass = false;
};

/// Single sound-soft disk at the origin, every formulation solved with the
/// preconditioner and compared with the Mie series on a circle.
std::vector<DiskResult> validate_disk(const DiskCase& disk, const ExperimentParams& params);

}  // namespace msbem::verify
