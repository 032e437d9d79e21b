#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>

#include <json.hpp>

#include "fieldgen/sampler.hpp"

namespace fieldgen {

/**
 * Scenario file contents after defaults are applied.
 *
 * The file is a JSON object; every key is optional and unknown keys are
 * rejected. config_key_help() lists keys and defaults.
 */
struct ScenarioConfig {
  explicit ScenarioConfig(Scenario s) : scenario(std::move(s)) {}

  Scenario scenario;
  std::uint64_t episodes = 1000;
  std::uint64_t master_seed = 0;
  DiversityLevel level = DiversityLevel::high;
  std::uint64_t episodes_per_goal = 10;
  std::size_t coverage_resolution = 16;
  nlohmann::json resolved;  // every key, defaults filled in
  std::string text;         // file contents as given ("" when built from defaults)

  /// episodes, times episodes_per_goal when reward labelling is on.
  std::uint64_t total_episodes() const;
};

nlohmann::json default_config_json();
/// Throws ConfigError on unknown keys, wrong types or out-of-range values.
ScenarioConfig config_from_json(const nlohmann::json& overrides, std::string text = {});
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig default_config();

/// Same config with some keys replaced; the verbatim text is kept.
ScenarioConfig with_overrides(const ScenarioConfig& base, const nlohmann::json& patch);

std::string config_key_help();

}  // namespace fieldgen
