#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "msbem/scene_io.hpp"
#include "msbem/verify.hpp"

using namespace msbem;
using namespace msbem::verify;
using formulations::Kind;

namespace {

geometry::Scene single(const geometry::Shape& shape, double k) {
  geometry::Scene s;
  s.k = k;
  s.obstacles = {shape};
  return s;
}

linalg::GmresReport fake(int iterations, bool converged) {
  linalg::GmresReport r;
  r.iterations = iterations;
  r.converged = converged;
  r.residual_history.assign(iterations + 1, 1.0);
  return r;
}

ConvergenceReport fake_report(const int plain[4], const int pre[4]) {
  ConvergenceReport rep;
  for (bool p : {false, true}) {
    for (std::size_t i = 0; i < 4; ++i) {
      const int it = p ? pre[i] : plain[i];
      rep.runs.push_back({formulations::kAllKinds[i], p, fake(it < 0 ? 100 : it, it >= 0)});
    }
  }
  return rep;
}

EquivalenceReport differences(double em, double mc, double ec, double bw) {
  EquivalenceReport r;
  r.comparisons = {{"EFIE-MFIE", em, 1, true}, {"MFIE-CFIE", mc, 1, true}, {"EFIE-CFIE", ec, 1, true},
                   {"BW-similarity", bw, 1, true}};
  return r;
}

}  // namespace

TEST_CASE("relative difference") {
  ComplexMatrix a = ComplexMatrix::Identity(2, 2), b = ComplexMatrix::Identity(2, 2);
  b(0, 1) = 0.5;
  CHECK(relative_difference(a, b, a) == 0.5);
  CHECK(relative_difference(a, a, a) == 0.0);
  CHECK_THROWS_AS(relative_difference(a, ComplexMatrix::Identity(3, 3), a), DimensionError);
}

TEST_CASE("greedy spectrum matching") {
  SUBCASE("permuted copies match exactly") {
    const std::vector<Complex> a = {Complex(1, 1), 2.0, Complex(0, -3), 0.5};
    const std::vector<Complex> b = {0.5, Complex(0, -3), Complex(1, 1), 2.0};
    const Matching m = match_spectra(a, b);
    CHECK(m.max_relative_error == 0.0);
    CHECK(m.permutation == std::vector<Index>{2, 3, 1, 0});
  }
  SUBCASE("error relative to the first multiset") {
    const Matching m = match_spectra({2.0, 10.0}, {2.1, 10.0});
    CHECK(m.max_relative_error == doctest::Approx(0.05));
  }
  SUBCASE("large eigenvalues choose first") {
    // 1.0 would grab 1.05 if visited first; ordering by magnitude gives 1.1 -> 1.05
    const Matching m = match_spectra({1.0, 1.1}, {1.05, 0.9});
    CHECK(m.permutation[1] == 0);
    CHECK(m.permutation[0] == 1);
  }
  SUBCASE("size mismatch") { CHECK_THROWS_AS(match_spectra({1.0}, {1.0, 2.0}), DimensionError); }
}

TEST_CASE("one obstacle: every preconditioned matrix is the identity") {
  for (const auto& shape : {geometry::Shape::ellipse(1.0, 0.6), geometry::Shape::kite(0.8)}) {
    const auto scene = single(shape, 5.0);
    const auto mesh = geometry::mesh_scene(scene, 10.0);
    const auto prepared = prepare(scene, mesh, {});
    const auto direct = check_direct_equality(prepared, {});
    for (const auto& c : direct.comparisons) CHECK(c.difference <= 1e-8);
    CHECK(check_bw_similarity(prepared, {}).comparisons.at(0).difference <= 1e-6);
    const auto spectra = check_spectra(prepared, {});
    for (const auto& s : spectra.spectra) {
      for (const Complex z : s) CHECK(std::abs(z - 1.0) <= 1e-8);
    }
    CHECK(spectra.cluster_fraction == 1.0);
  }
}

TEST_CASE("desk scene") {
  const auto scene = io::preset_scene("desk");
  const auto th = io::desk_thresholds();
  const auto mesh = geometry::mesh_scene(scene, 15.0);
  const auto prepared = prepare(scene, mesh, {});

  const auto direct = check_direct_equality(prepared, th);
  REQUIRE(direct.comparisons.size() == 3);
  CHECK(direct.pass());
  for (const auto& c : direct.comparisons) CHECK(c.difference <= 5e-2);
  const auto bw = check_bw_similarity(prepared, th);
  CHECK(bw.pass());
  CHECK(bw.at("BW-similarity").difference <= 1e-2);

  const auto spectra = check_spectra(prepared, th);
  CHECK(spectra.pass);
  CHECK(spectra.max_relative_error <= 3e-2);
  CHECK(spectra.cluster_fraction >= 0.5);
  for (const auto& s : spectra.spectra) CHECK(static_cast<Index>(s.size()) == mesh.size());

  const auto conv = convergence_histories(prepared, 50, 1e-6, 1000);
  CHECK(conv.runs.size() == 8);
  const auto checks = evaluate_convergence(conv);
  CHECK(checks.pass());
  CHECK(checks.max_history_deviation <= 0.1);
  CHECK(checks.bw_history_deviation <= 0.25);
  for (const auto& r : conv.runs) {
    if (r.preconditioned) CHECK(r.report.converged);
  }

  // the scene overloads redo the same work
  CHECK(check_direct_equality(scene, mesh, {}, th).at("EFIE-MFIE").difference ==
        direct.at("EFIE-MFIE").difference);
}

TEST_CASE("differences shrink under refinement") {
  const auto scene = io::preset_scene("desk");
  const auto th = io::desk_thresholds();
  auto both = [&](double ppw) {
    const auto prepared = prepare(scene, geometry::mesh_scene(scene, ppw), {});
    EquivalenceReport r = check_direct_equality(prepared, th);
    r.comparisons.push_back(check_bw_similarity(prepared, th).comparisons.front());
    return r;
  };
  const auto check = compare_refinement(both(10.0), both(20.0));
  CHECK(check.pass);
  for (std::size_t i = 0; i < check.names.size(); ++i) CHECK(check.ratio[i] >= check.required[i]);
}

TEST_CASE("refinement bookkeeping") {
  const auto ok = compare_refinement(differences(1e-2, 1e-3, 1e-2, 1e-4), differences(4e-3, 5e-4, 5e-3, 9e-5));
  CHECK(ok.pass);
  CHECK(ok.required == std::vector<double>{1.5, 1.5, 1.5, 1.0});
  CHECK(ok.ratio[0] == doctest::Approx(2.5));
  // a direct pair that only drops by 1.4 fails
  CHECK_FALSE(compare_refinement(differences(1e-2, 1e-3, 1e-2, 1e-4), differences(4e-3, 5e-4, 1e-2 / 1.4, 9e-5)).pass);
  // BW that grows fails
  CHECK_FALSE(compare_refinement(differences(1e-2, 1e-3, 1e-2, 1e-4), differences(4e-3, 5e-4, 5e-3, 2e-4)).pass);
}

TEST_CASE("convergence bookkeeping") {
  const int plain[4] = {80, 40, 26, 20};
  SUBCASE("all good") {
    const int pre[4] = {9, 9, 10, 9};
    const auto c = evaluate_convergence(fake_report(plain, pre));
    CHECK(c.pass());
    CHECK(c.min_preconditioned == 9);
    CHECK(c.max_preconditioned == 10);
  }
  SUBCASE("spread of two iterations") {
    const int pre[4] = {9, 11, 10, 9};
    CHECK_FALSE(evaluate_convergence(fake_report(plain, pre)).preconditioned_counts_agree);
  }
  SUBCASE("no speed-up for BW") {
    const int pre[4] = {20, 20, 20, 20};
    const auto c = evaluate_convergence(fake_report(plain, pre));
    CHECK(c.cfie_accelerated);
    CHECK_FALSE(c.bw_accelerated);
    CHECK_FALSE(c.pass());
  }
  SUBCASE("plain run that never converged") {
    const int stuck[4] = {-1, -1, -1, -1};
    const int pre[4] = {9, 9, 9, 9};
    CHECK(evaluate_convergence(fake_report(stuck, pre)).pass());
  }
  SUBCASE("missing run") {
    ConvergenceReport empty;
    CHECK_THROWS_AS(empty.run(Kind::efie, true), std::out_of_range);
  }
}

TEST_CASE("disk validation helper") {
  const auto results = validate_disk({}, {});
  REQUIRE(results.size() == 4);
  for (const auto& r : results) {
    CHECK(r.pass);
    CHECK(r.relative_l2_error <= 1e-2);
  }
  DiskCase bad;
  bad.eval_radius = 0.5;
  CHECK_THROWS_AS(validate_disk(bad, {}), ParameterError);
}
