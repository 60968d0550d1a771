// msbem: scene files, operator comparisons, spectra, solves and the disk check.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "msbem/scene_io.hpp"
#include "msbem/verify.hpp"

namespace fs = std::filesystem;
using namespace msbem;
using nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kThresholdFailure = 1, kInputError = 2, kNumericFailure = 3 };

struct Options {
  std::string scene_file;
  std::string preset = "desk";
  std::uint64_t seed = io::kDefaultSeed;
  double ppw = 15.0;
  double alpha = 0.2;
  std::optional<double> eta_re, eta_im, eta_bw_re, eta_bw_im;
  int restart = 50;
  double tol = 1e-6;
  int maxiter = 1000;
  std::string out_dir = ".";
  std::string thresholds;  // empty: follow the preset
};

void add_common(CLI::App* cmd, Options& o, bool solver_flags) {
  cmd->add_option("--scene", o.scene_file, "scene file (overrides --preset)");
  cmd->add_option("--preset", o.preset, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--seed", o.seed, "placement seed for presets");
  cmd->add_option("--ppw", o.ppw, "points per wavelength");
  cmd->add_option("--alpha", o.alpha, "CFIE weight");
  cmd->add_option("--eta-re", o.eta_re);
  cmd->add_option("--eta-im", o.eta_im);
  cmd->add_option("--eta-bw-re", o.eta_bw_re);
  cmd->add_option("--eta-bw-im", o.eta_bw_im);
  cmd->add_option("--out", o.out_dir, "output directory");
  if (solver_flags) {
    cmd->add_option("--restart", o.restart, "GMRES restart length");
    cmd->add_option("--tol", o.tol, "GMRES relative tolerance");
    cmd->add_option("--maxiter", o.maxiter, "GMRES iteration cap");
  }
}

void check_options(const Options& o) {
  if (!(o.ppw >= 4.0)) throw ParameterError("--ppw must be at least 4");
  if (o.restart < 1) throw ParameterError("--restart must be positive");
  if (!(o.tol > 0.0)) throw ParameterError("--tol must be positive");
  if (o.maxiter < 0) throw ParameterError("--maxiter must be non-negative");
}

verify::ExperimentParams experiment(const Options& o) {
  verify::ExperimentParams p;
  p.formulation.alpha = o.alpha;
  if (o.eta_re || o.eta_im) p.formulation.eta = Complex(o.eta_re.value_or(0.0), o.eta_im.value_or(0.0));
  if (o.eta_bw_re || o.eta_bw_im) {
    p.formulation.eta_bw = Complex(o.eta_bw_re.value_or(0.0), o.eta_bw_im.value_or(0.0));
  }
  return p;
}

geometry::Scene load_scene(const Options& o) {
  if (!o.scene_file.empty()) return io::read_scene(o.scene_file);
  return io::preset_scene(o.preset, o.seed);
}

verify::Thresholds thresholds(const Options& o) {
  if (!o.thresholds.empty()) return io::thresholds_by_name(o.thresholds);
  return io::thresholds_by_name(o.scene_file.empty() ? o.preset : "desk");
}

fs::path output(const Options& o, const std::string& name) {
  fs::create_directories(o.out_dir);
  return fs::path(o.out_dir) / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << text;
}

ordered_json params_json(const geometry::Scene& scene, const geometry::SceneMesh& mesh, const Options& o) {
  const auto p = experiment(o);
  const auto cfie = p.formulation.make(formulations::Kind::cfie, scene.k);
  const auto bw = p.formulation.make(formulations::Kind::bw, scene.k);
  return {{"k", scene.k},
          {"obstacles", scene.obstacles.size()},
          {"ppw", o.ppw},
          {"unknowns", mesh.size()},
          {"alpha", cfie.alpha},
          {"eta", {cfie.eta.real() + 0.0, cfie.eta.imag() + 0.0}},
          {"eta_bw", {bw.eta_bw.real() + 0.0, bw.eta_bw.imag() + 0.0}}};
}

int cmd_scene(const Options& o) {
  const geometry::Scene scene = load_scene(o);
  const fs::path path = output(o, "scene.json");
  io::write_scene(scene, path.string());
  std::cout << "wrote " << path.string() << " (" << scene.obstacles.size() << " obstacles)\n";
  return kPass;
}

int cmd_verify(const Options& o, std::optional<double> refine_ppw) {
  check_options(o);
  const geometry::Scene scene = load_scene(o);
  const auto th = thresholds(o);
  const auto params = experiment(o);
  const auto mesh = geometry::mesh_scene(scene, o.ppw);
  const auto prepared = verify::prepare(scene, mesh, params);
  const auto direct = verify::check_direct_equality(prepared, th);
  const auto bw = verify::check_bw_similarity(prepared, th);

  ordered_json doc;
  doc["schema_version"] = io::kSchemaVersion;
  doc["command"] = "verify";
  doc["parameters"] = params_json(scene, mesh, o);
  ordered_json comparisons = io::to_json(direct);
  for (const auto& c : io::to_json(bw)) comparisons.push_back(c);
  doc["comparisons"] = comparisons;
  bool pass = direct.pass() && bw.pass();
  for (const auto& c : comparisons) std::cout << c["name"].get<std::string>() << " " << c["difference"] << "\n";

  if (refine_ppw) {
    if (!(*refine_ppw > o.ppw)) throw ParameterError("--refine-ppw must exceed --ppw");
    const auto fine_mesh = geometry::mesh_scene(scene, *refine_ppw);
    const auto fine = verify::prepare(scene, fine_mesh, params);
    verify::EquivalenceReport coarse_all = direct, fine_all = verify::check_direct_equality(fine, th);
    coarse_all.comparisons.push_back(bw.comparisons.front());
    fine_all.comparisons.push_back(verify::check_bw_similarity(fine, th).comparisons.front());
    const auto refinement = verify::compare_refinement(coarse_all, fine_all);
    doc["refinement"] = io::to_json(refinement);
    doc["refinement"]["ppw"] = *refine_ppw;
    pass = pass && refinement.pass;
    std::cout << "refinement " << (refinement.pass ? "pass" : "fail") << "\n";
  }
  doc["pass"] = pass;
  write_text(output(o, "verify.json"), io::dump(doc));
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kPass : kThresholdFailure;
}

int cmd_spectrum(const Options& o) {
  check_options(o);
  const geometry::Scene scene = load_scene(o);
  const auto mesh = geometry::mesh_scene(scene, o.ppw);
  const auto prepared = verify::prepare(scene, mesh, experiment(o));
  const auto report = verify::check_spectra(prepared, thresholds(o));

  std::ofstream csv(output(o, "eigenvalues.csv"), std::ios::binary);
  io::write_eigenvalue_csv(csv, report);
  ordered_json doc;
  doc["schema_version"] = io::kSchemaVersion;
  doc["command"] = "spectrum";
  doc["parameters"] = params_json(scene, mesh, o);
  doc["spectrum"] = io::to_json(report);
  doc["pass"] = report.pass;
  write_text(output(o, "spectrum.json"), io::dump(doc));
  std::cout << "max relative eigenvalue error " << io::format_double(report.max_relative_error) << "\n"
            << (report.pass ? "PASS" : "FAIL") << "\n";
  return report.pass ? kPass : kThresholdFailure;
}

int cmd_solve(const Options& o, const std::string& which, const std::string& precond) {
  check_options(o);
  const geometry::Scene scene = load_scene(o);
  const auto mesh = geometry::mesh_scene(scene, o.ppw);
  const auto prepared = verify::prepare(scene, mesh, experiment(o));

  std::vector<formulations::Kind> kinds;
  if (which == "all") {
    kinds.assign(std::begin(formulations::kAllKinds), std::end(formulations::kAllKinds));
  } else {
    kinds.push_back(formulations::kind_from_string(which));
  }
  std::vector<bool> modes;
  if (precond != "on") modes.push_back(false);
  if (precond != "off") modes.push_back(true);

  verify::ConvergenceReport report;
  report.restart = o.restart;
  report.tol = o.tol;
  report.maxiter = o.maxiter;
  std::ofstream density(output(o, "density.csv"), std::ios::binary);
  density << "formulation,preconditioned,node,re,im\n";
  bool all_converged = true;
  for (bool pre : modes) {
    for (auto kind : kinds) {
      const auto i = static_cast<std::size_t>(kind);
      const auto sol = formulations::solve(prepared.systems[i], pre ? &prepared.preconditioners[i] : nullptr,
                                           o.restart, o.tol, o.maxiter);
      report.runs.push_back({kind, pre, sol.report});
      all_converged = all_converged && sol.report.converged;
      for (Index n = 0; n < sol.density.size(); ++n) {
        density << formulations::to_string(kind) << ',' << (pre ? 1 : 0) << ',' << n << ','
                << io::format_double(sol.density[n].real()) << ',' << io::format_double(sol.density[n].imag())
                << '\n';
      }
      std::cout << formulations::to_string(kind) << (pre ? " preconditioned " : " plain ") << sol.report.iterations
                << (sol.report.converged ? "" : " (not converged)") << "\n";
    }
  }
  std::ofstream csv(output(o, "residuals.csv"), std::ios::binary);
  io::write_residual_csv(csv, report);

  ordered_json doc;
  doc["schema_version"] = io::kSchemaVersion;
  doc["command"] = "solve";
  doc["parameters"] = params_json(scene, mesh, o);
  doc["convergence"] = io::to_json(report);
  bool pass = all_converged;
  if (which == "all" && precond == "both") {
    const auto checks = verify::evaluate_convergence(report);
    doc["checks"] = io::to_json(checks);
    pass = pass && checks.pass();
  }
  doc["pass"] = pass;
  write_text(output(o, "solve.json"), io::dump(doc));
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kPass : kThresholdFailure;
}

int cmd_validate_disk(const Options& o, verify::DiskCase disk) {
  check_options(o);
  disk.ppw = o.ppw;
  disk.restart = o.restart;
  disk.maxiter = o.maxiter;
  const auto results = verify::validate_disk(disk, experiment(o));
  ordered_json doc;
  doc["schema_version"] = io::kSchemaVersion;
  doc["command"] = "validate-disk";
  doc["parameters"] = {{"k", disk.k},         {"radius", disk.radius}, {"ppw", disk.ppw},
                       {"eval_radius", disk.eval_radius}, {"eval_points", disk.eval_points},
                       {"threshold", disk.threshold}};
  ordered_json rows = ordered_json::array();
  bool pass = true;
  for (const auto& r : results) {
    rows.push_back({{"formulation", formulations::to_string(r.kind)},
                    {"unknowns", r.unknowns},
                    {"iterations", r.report.iterations},
                    {"converged", r.report.converged},
                    {"relative_l2_error", r.relative_l2_error},
                    {"pass", r.pass}});
    pass = pass && r.pass;
    std::cout << formulations::to_string(r.kind) << " " << io::format_double(r.relative_l2_error) << "\n";
  }
  doc["results"] = rows;
  doc["pass"] = pass;
  write_text(output(o, "disk.json"), io::dump(doc));
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kPass : kThresholdFailure;
}

int report_error(const Options& o, const std::string& type, const std::string& message, int code) {
  const ordered_json doc = {{"schema_version", io::kSchemaVersion},
                            {"error", {{"type", type}, {"message", message}}},
                            {"exit_code", code}};
  std::cerr << doc.dump() << "\n";
  // best effort copy next to the other outputs
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  std::ofstream out(fs::path(o.out_dir) / "error.json", std::ios::binary);
  if (out) out << io::dump(doc);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple-scattering BEM: integral equation comparisons"};
  app.require_subcommand(1);
  Options o;

  auto* scene = app.add_subcommand("scene", "write a scene file for a preset and seed");
  add_common(scene, o, false);

  std::optional<double> refine_ppw;
  auto* ver = app.add_subcommand("verify", "equality and similarity of the preconditioned matrices");
  add_common(ver, o, false);
  ver->add_option("--refine-ppw", refine_ppw, "also check that differences shrink at this density");
  ver->add_option("--thresholds", o.thresholds, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));

  auto* spec = app.add_subcommand("spectrum", "eigenvalues of the preconditioned matrices");
  add_common(spec, o, false);
  spec->add_option("--thresholds", o.thresholds, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));

  std::string which = "all", precond = "both";
  auto* sol = app.add_subcommand("solve", "GMRES solves, densities and residual histories");
  add_common(sol, o, true);
  sol->add_option("--formulation", which, "EFIE, MFIE, CFIE, BW or all");
  sol->add_option("--precond", precond, "on, off or both")->check(CLI::IsMember({"on", "off", "both"}));

  verify::DiskCase disk;
  auto* dk = app.add_subcommand("validate-disk", "single disk against the Mie series");
  add_common(dk, o, true);
  dk->add_option("--k", disk.k, "wavenumber");
  dk->add_option("--radius", disk.radius, "disk radius");
  dk->add_option("--eval-radius", disk.eval_radius, "radius of the evaluation circle");
  o.maxiter = 1000;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kInputError;
  }

  try {
    if (*scene) return cmd_scene(o);
    if (*ver) return cmd_verify(o, refine_ppw);
    if (*spec) return cmd_spectrum(o);
    if (*sol) return cmd_solve(o, which, precond);
    if (*dk) {
      // the disk check solves to a tighter tolerance unless told otherwise
      if (dk->count("--tol") == 0) o.tol = 1e-10;
      disk.tol = o.tol;
      return cmd_validate_disk(o, disk);
    }
  } catch (const ParameterError& e) {
    return report_error(o, "input", e.what(), kInputError);
  } catch (const DomainError& e) {
    return report_error(o, "input", e.what(), kInputError);
  } catch (const DimensionError& e) {
    return report_error(o, "input", e.what(), kInputError);
  } catch (const NumericalError& e) {
    return report_error(o, "numeric", e.what(), kNumericFailure);
  } catch (const std::exception& e) {
    return report_error(o, "internal", e.what(), kNumericFailure);
  }
  return kInputError;
}
