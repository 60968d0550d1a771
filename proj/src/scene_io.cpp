#include "msbem/scene_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace msbem::io {

using geometry::Shape;
using geometry::ShapeKind;
using nlohmann::json;
using nlohmann::ordered_json;

geometry::SceneConfig desk_config() {
  geometry::SceneConfig c;
  c.k = 5.0;
  c.beta = Vec2(0.0, 1.0);
  c.templates = {Shape::ellipse(1.0, 0.6), Shape::rounded_rectangle(0.9, 0.7), Shape::kite(0.8)};
  c.box = {0.0, 12.0, 0.0, 12.0};
  c.min_center_distance = 3.0;
  c.random_rotation = true;
  return c;
}

geometry::SceneConfig full_scale_config() {
  geometry::SceneConfig c;
  c.k = 20.0;
  c.beta = Vec2(0.0, 1.0);
  for (int i = 0; i < 10; ++i) c.templates.push_back(Shape::ellipse(1.0, 0.6));
  for (int i = 0; i < 10; ++i) c.templates.push_back(Shape::rounded_rectangle(0.9, 0.7));
  for (int i = 0; i < 10; ++i) c.templates.push_back(Shape::kite(0.8));
  c.box = {0.0, 60.0, 0.0, 60.0};
  c.min_center_distance = 3.0;
  c.random_rotation = true;
  c.size_min = 0.8;
  c.size_max = 1.2;
  return c;
}

geometry::SceneConfig preset_config(const std::string& name) {
  if (name == "desk") return desk_config();
  if (name == "paper") return full_scale_config();
  throw ParameterError("unknown preset '" + name + "' (expected desk or paper)");
}

geometry::Scene preset_scene(const std::string& name, std::uint64_t seed) {
  return geometry::generate_scene(preset_config(name), seed);
}

verify::Thresholds desk_thresholds() { return {}; }

verify::Thresholds full_scale_thresholds() {
  verify::Thresholds t;
  t.efie_mfie = 8e-2;
  t.mfie_cfie = 8e-2;
  t.efie_cfie = 1.6e-2;
  t.bw_similarity = 8e-4;
  t.spectrum = 3e-2;
  return t;
}

verify::Thresholds thresholds_by_name(const std::string& name) {
  if (name == "desk") return desk_thresholds();
  if (name == "paper") return full_scale_thresholds();
  throw ParameterError("unknown threshold set '" + name + "'");
}

ordered_json scene_to_json(const geometry::Scene& scene) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["k"] = scene.k;
  doc["beta"] = {scene.beta.x(), scene.beta.y()};
  doc["box"] = {scene.box.xmin, scene.box.xmax, scene.box.ymin, scene.box.ymax};
  doc["min_center_distance"] = scene.min_center_distance;
  doc["seed"] = scene.seed;
  ordered_json obstacles = ordered_json::array();
  for (const Shape& s : scene.obstacles) {
    ordered_json o;
    o["kind"] = geometry::to_string(s.kind);
    ordered_json params;
    switch (s.kind) {
      case ShapeKind::ellipse:
        params["a"] = s.a;
        params["b"] = s.b;
        break;
      case ShapeKind::rounded_rectangle:
        params["a"] = s.a;
        params["b"] = s.b;
        params["p"] = s.exponent;
        break;
      case ShapeKind::kite:
        params["s"] = s.scale;
        break;
    }
    o["params"] = params;
    o["center"] = {s.center.x(), s.center.y()};
    o["rotation"] = s.rotation;
    obstacles.push_back(o);
  }
  doc["obstacles"] = obstacles;
  return doc;
}

namespace {

Vec2 read_pair(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2) throw ParameterError(std::string("scene: '") + what + "' must be [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

geometry::Scene scene_from_json(const json& doc) {
  try {
    if (!doc.contains("schema_version") || doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw ParameterError("scene: unsupported or missing schema_version");
    }
    geometry::Scene scene;
    scene.k = doc.at("k").get<double>();
    scene.beta = read_pair(doc.at("beta"), "beta");
    const json& box = doc.at("box");
    if (!box.is_array() || box.size() != 4) throw ParameterError("scene: 'box' must be [xmin, xmax, ymin, ymax]");
    scene.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(), box[3].get<double>()};
    scene.min_center_distance = doc.at("min_center_distance").get<double>();
    scene.seed = doc.value("seed", std::uint64_t{0});
    for (const json& o : doc.at("obstacles")) {
      Shape s;
      s.kind = geometry::shape_kind_from_string(o.at("kind").get<std::string>());
      const json& p = o.at("params");
      switch (s.kind) {
        case ShapeKind::ellipse:
          s.a = p.at("a").get<double>();
          s.b = p.at("b").get<double>();
          break;
        case ShapeKind::rounded_rectangle:
          s.a = p.at("a").get<double>();
          s.b = p.at("b").get<double>();
          s.exponent = p.value("p", 8);
          break;
        case ShapeKind::kite:
          s.scale = p.at("s").get<double>();
          break;
      }
      s.center = read_pair(o.at("center"), "center");
      s.rotation = o.value("rotation", 0.0);
      scene.obstacles.push_back(s);
    }
    scene.validate();
    return scene;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("scene: malformed document: ") + e.what());
  }
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

void write_scene(const geometry::Scene& scene, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write scene file " + path);
  out << dump(scene_to_json(scene));
}

geometry::Scene read_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open scene file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParameterError("scene file " + path + " is not valid JSON: " + e.what());
  }
  return scene_from_json(doc);
}

ordered_json to_json(const verify::EquivalenceReport& report) {
  ordered_json doc = ordered_json::array();
  for (const auto& c : report.comparisons) {
    doc.push_back({{"name", c.name}, {"difference", c.difference}, {"threshold", c.threshold}, {"pass", c.pass}});
  }
  return doc;
}

ordered_json to_json(const verify::SpectrumReport& report) {
  ordered_json doc;
  doc["dimension"] = report.spectra[0].size();
  doc["max_relative_error"] = report.max_relative_error;
  doc["threshold"] = report.threshold;
  doc["cluster_fraction"] = report.cluster_fraction;
  doc["pass"] = report.pass;
  ordered_json pairs = ordered_json::array();
  const char* names[] = {"EFIE-MFIE", "EFIE-CFIE", "EFIE-BW"};
  for (std::size_t i = 0; i < 3; ++i) {
    pairs.push_back({{"pair", names[i]}, {"max_relative_error", report.matchings[i].max_relative_error}});
  }
  doc["matchings"] = pairs;
  return doc;
}

ordered_json to_json(const verify::ConvergenceReport& report) {
  ordered_json doc;
  doc["restart"] = report.restart;
  doc["tol"] = report.tol;
  doc["maxiter"] = report.maxiter;
  doc["residual_norm"] = "preconditioned runs report |P r| / |P b|; plain runs report |r| / |b|";
  ordered_json runs = ordered_json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"formulation", formulations::to_string(r.kind)},
                    {"preconditioned", r.preconditioned},
                    {"iterations", r.report.iterations},
                    {"converged", r.report.converged},
                    {"final_residual", r.report.residual_history.back()}});
  }
  doc["runs"] = runs;
  return doc;
}

ordered_json to_json(const verify::ConvergenceChecks& c) {
  return {{"min_preconditioned_iterations", c.min_preconditioned},
          {"max_preconditioned_iterations", c.max_preconditioned},
          {"preconditioned_counts_agree", c.preconditioned_counts_agree},
          {"cfie_accelerated", c.cfie_accelerated},
          {"bw_accelerated", c.bw_accelerated},
          {"all_preconditioned_converged", c.all_preconditioned_converged},
          {"max_history_deviation", c.max_history_deviation},
          {"bw_history_deviation", c.bw_history_deviation},
          {"pass", c.pass()}};
}

ordered_json to_json(const verify::RefinementCheck& check) {
  ordered_json doc;
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < check.names.size(); ++i) {
    rows.push_back({{"name", check.names[i]},
                    {"coarse", check.coarse[i]},
                    {"fine", check.fine[i]},
                    {"ratio", check.ratio[i]},
                    {"required", check.required[i]}});
  }
  doc["comparisons"] = rows;
  doc["pass"] = check.pass;
  return doc;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_residual_csv(std::ostream& out, const verify::ConvergenceReport& report) {
  out << "formulation,preconditioned,iteration,residual\n";
  for (const auto& r : report.runs) {
    for (std::size_t i = 0; i < r.report.residual_history.size(); ++i) {
      out << formulations::to_string(r.kind) << ',' << (r.preconditioned ? 1 : 0) << ',' << i << ','
          << format_double(r.report.residual_history[i]) << '\n';
    }
  }
}

void write_eigenvalue_csv(std::ostream& out, const verify::SpectrumReport& report) {
  out << "formulation,re,im\n";
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string name = formulations::to_string(formulations::kAllKinds[i]);
    for (const Complex& z : report.spectra[i]) {
      out << name << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
    }
  }
}

}  // namespace msbem::io
