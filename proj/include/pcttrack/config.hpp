#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pcttrack/simulation.hpp"

namespace pcttrack {

/// Constants and checks derived from a config before it runs.
struct ValidationReport {
  double kappa = 0.0;
  double gain_margin = 0.0;    // c_psi u_m - 2 c_u kappa
  double contraction_rate = 0.0;
  double lyapunov_rate = 0.0;
  double method1_rhs = 0.0;    // surge-floor threshold at the configured u_m
  bool method1_satisfied = false;
  std::vector<std::string> warnings;
};

/// Collects every violated invariant; throws ValidationError listing all of
/// them, otherwise returns the report. A Method-1 config that misses the
/// sufficient surge-floor condition only warns: the condition is not necessary.
ValidationReport validate_config(const ScenarioConfig& cfg);

/// Missing keys take the standard scenario defaults. Angles are in
/// degrees, everything else SI. Throws Error(parse) on malformed input.
ScenarioConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// Reads and parses; throws Error(io) / Error(parse). Does not validate.
ScenarioConfig load_config(const std::string& path);

/// fig2-nominal (u_ld = 10), fig5-slow (1.3), fig6-threshold (1.8).
std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

struct RunManifest {
  std::string scenario;
  std::uint64_t seed = 0;
  ScenarioConfig config;
  ValidationReport report;
  std::string trace_path;
  std::string metrics_path;
  std::string config_path;
};

nlohmann::json manifest_to_json(const RunManifest& m);
nlohmann::json report_to_json(const ValidationReport& r);

}  // namespace pcttrack
