#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "msbem/geometry.hpp"
#include "msbem/verify.hpp"

namespace msbem::io {

inline constexpr int kSchemaVersion = 1;

/// Three obstacles (ellipse 1.0 x 0.6, superellipse 0.9 x 0.7, kite 0.8) in
/// [0, 12]^2, k = 5, beta = (0, 1), minimum center distance 3.
geometry::SceneConfig desk_config();

/// 30 obstacles (10 of each shape, sizes jittered in [0.8, 1.2]) in
/// [0, 60]^2, k = 20, beta = (0, 1), minimum center distance 3.
geometry::SceneConfig full_scale_config();

inline constexpr std::uint64_t kDefaultSeed = 1;

/// "desk" or "paper"; throws ParameterError otherwise.
geometry::SceneConfig preset_config(const std::string& name);
geometry::Scene preset_scene(const std::string& name, std::uint64_t seed = kDefaultSeed);

/// Regression bounds for the desk preset.
verify::Thresholds desk_thresholds();
/// Reported full-scale bounds with a x2 safety margin.
verify::Thresholds full_scale_thresholds();
verify::Thresholds thresholds_by_name(const std::string& name);

nlohmann::ordered_json scene_to_json(const geometry::Scene& scene);
/// Throws ParameterError on schema mismatch or missing fields.
geometry::Scene scene_from_json(const nlohmann::json& doc);

/// Stable text form: two-space indent, trailing newline.
std::string dump(const nlohmann::ordered_json& doc);

void write_scene(const geometry::Scene& scene, const std::string& path);
geometry::Scene read_scene(const std::string& path);

nlohmann::ordered_json to_json(const verify::EquivalenceReport& report);
nlohmann::ordered_json to_json(const verify::SpectrumReport& report);
nlohmann::ordered_json to_json(const verify::ConvergenceReport& report);
nlohmann::ordered_json to_json(const verify::ConvergenceChecks& checks);
nlohmann::ordered_json to_json(const verify::RefinementCheck& check);

/// Columns: formulation,preconditioned,iteration,residual
void write_residual_csv(std::ostream& out, const verify::ConvergenceReport& report);
/// Columns: formulation,re,im
void write_eigenvalue_csv(std::ostream& out, const verify::SpectrumReport& report);

std::string format_double(double v);

}  // namespace msbem::io
