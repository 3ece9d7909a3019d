#pragma once

// JSON configuration file with one section per component:
//
//   scenario  duration, dt, record_every, transient, seed, smoothing, noise_variance,
//             controller {kp, kv}, obstacles [{center, radius}],
//             reference {waypoints, segment_duration, closed},
//             initial_state {position_offset, velocity}
//   observer  gains, scale
//   window    capacity, trigger_distance
//   gp        amplitude, length_scales, noise_variance_output,
//             noise_variance_derivative, baseline_source ("measurement" | "observer")
//   bounds    rho (null -> trigger_distance / 2), tube_radius, eta, perturbations_per_center
//
// Omitted keys take the defaults of ScenarioConfig::defaults(); unknown keys are rejected.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "hgogp/scenario.hpp"

namespace hgogp {

// Throws ConfigError with the offending field (or line for syntax errors).
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

// Effective configuration with every default resolved.
nlohmann::ordered_json config_to_json(const ScenarioConfig& config);
std::string dump_config(const ScenarioConfig& config);

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace hgogp
