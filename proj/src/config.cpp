#include "fieldgen/config.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

#include "fieldgen/errors.hpp"

namespace fieldgen {

using nlohmann::json;

namespace {

struct KeyDoc {
  const char* key;
  const char* doc;
};

constexpr KeyDoc kKeyDocs[] = {
    {"goal_position", "goal end-effector position [x, y, z] in m"},
    {"goal_orientation", "goal orientation as an axis-angle triple in rad"},
    {"cone_axis", "cone axis u (normalized), opposite to the gripper closing direction"},
    {"cone_half_angle_rad", "cone half-angle theta in (0, pi/2)"},
    {"k_r", "orientation gain in (0, 1], or \"auto\" to finish the rotation with the path"},
    {"gripper_close_dist_m", "gripper closes within this distance of the goal"},
    {"curve_type", "cycloid | bezier"},
    {"beta_m", "waypoint spacing in m"},
    {"chunk_size", "actions per chunk; only 30 is supported"},
    {"chunk_stride", "waypoints between consecutive chunk starts"},
    {"reward_mode", "off | uniform_reward | uniform_volume"},
    {"reward_sphere_radius_m", "radius of the endpoint perturbation ball in m"},
    {"episodes_per_goal", "episode multiplier when reward_mode is not off"},
    {"workspace_min", "start box min corner [x, y, z] in m"},
    {"workspace_max", "start box max corner [x, y, z] in m"},
    {"orientation_perturbation_rad", "max start orientation offset from the goal in rad"},
    {"episodes", "number of episodes to generate"},
    {"master_seed", "seed every episode seed is derived from"},
    {"diversity_level", "low | middle | high (high = field episodes)"},
    {"baseline_jitter_m", "waypoint jitter sigma for the low-diversity baseline in m"},
    {"coverage_resolution", "voxels per cube edge for coverage reports"},
};

Vec3 vec3(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3) throw ConfigError(std::string(key) + " must be an array of 3 numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ConfigError(std::string(key) + " must be an array of 3 numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

double number(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
  return v.get<double>();
}

std::uint64_t count(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(std::string(key) + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string text_value(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string(key) + " must be a string");
  return v.get<std::string>();
}

}  // namespace

std::uint64_t ScenarioConfig::total_episodes() const {
  return scenario.settings.reward_mode == RewardMode::off ? episodes : episodes * episodes_per_goal;
}

json default_config_json() {
  return {
      {"goal_position", {0.5, 0.0, 0.1}},
      {"goal_orientation", {0.0, 0.0, 0.0}},
      {"cone_axis", {0.0, 0.0, 1.0}},
      {"cone_half_angle_rad", std::numbers::pi / 6},
      {"k_r", "auto"},
      {"gripper_close_dist_m", 0.01},
      {"curve_type", "cycloid"},
      {"beta_m", 0.0025},
      {"chunk_size", kChunkSize},
      {"chunk_stride", kChunkSize},
      {"reward_mode", "off"},
      {"reward_sphere_radius_m", 0.05},
      {"episodes_per_goal", 10},
      {"workspace_min", {0.3, -0.2, 0.15}},
      {"workspace_max", {0.7, 0.2, 0.4}},
      {"orientation_perturbation_rad", 0.5},
      {"episodes", 1000},
      {"master_seed", 0},
      {"diversity_level", "high"},
      {"baseline_jitter_m", 0.002},
      {"coverage_resolution", 16},
  };
}

ScenarioConfig config_from_json(const json& overrides, std::string text) {
  if (!overrides.is_object()) throw ConfigError("scenario config must be a JSON object");
  json j = default_config_json();
  for (const auto& item : overrides.items()) {
    if (!j.contains(item.key())) throw ConfigError("unknown config key '" + item.key() + "'");
    j[item.key()] = item.value();
  }

  try {
    const double close_dist = number(j, "gripper_close_dist_m");
    std::optional<double> gain;
    if (j.at("k_r").is_string()) {
      if (j.at("k_r").get<std::string>() != "auto") throw ConfigError("k_r must be a number or \"auto\"");
    } else {
      gain = number(j, "k_r");
    }
    const ConeField cone(vec3(j, "goal_position"), UnitVector3(vec3(j, "cone_axis")), number(j, "cone_half_angle_rad"));
    const Rotation goal_r = rotation_exp(AxisAngle(vec3(j, "goal_orientation")));
    const PreManipulationField field(cone, goal_r, gain, close_dist);
    const WorkspaceBox box(vec3(j, "workspace_min"), vec3(j, "workspace_max"), number(j, "orientation_perturbation_rad"));

    GenerationSettings s;
    s.curve = parse_curve_type(text_value(j, "curve_type"));
    s.beta = number(j, "beta_m");
    if (!(s.beta > 0.0)) throw ConfigError("beta_m must be positive");
    if (count(j, "chunk_size") != kChunkSize) throw ConfigError("chunk_size must be 30");
    s.chunk_stride = count(j, "chunk_stride");
    if (s.chunk_stride == 0) throw ConfigError("chunk_stride must be at least 1");
    s.reward_mode = parse_reward_mode(text_value(j, "reward_mode"));
    s.reward_radius = number(j, "reward_sphere_radius_m");
    if (!(s.reward_radius > 0.0)) throw ConfigError("reward_sphere_radius_m must be positive");
    s.baseline_jitter = number(j, "baseline_jitter_m");
    if (!(s.baseline_jitter >= 0.0)) throw ConfigError("baseline_jitter_m must be >= 0");

    ScenarioConfig c(Scenario{field, box, s});
    c.episodes = count(j, "episodes");
    c.master_seed = count(j, "master_seed");
    c.level = parse_diversity_level(text_value(j, "diversity_level"));
    c.episodes_per_goal = count(j, "episodes_per_goal");
    if (c.episodes_per_goal == 0) throw ConfigError("episodes_per_goal must be at least 1");
    c.coverage_resolution = count(j, "coverage_resolution");
    if (c.coverage_resolution == 0) throw ConfigError("coverage_resolution must be at least 1");
    c.resolved = std::move(j);
    c.text = std::move(text);
    return c;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j, text);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ScenarioConfig default_config() { return config_from_json(json::object()); }

ScenarioConfig with_overrides(const ScenarioConfig& base, const json& patch) {
  json j = base.resolved;
  for (const auto& item : patch.items()) {
    if (!j.contains(item.key())) throw ConfigError("unknown config key '" + item.key() + "'");
    j[item.key()] = item.value();
  }
  return config_from_json(j, base.text);
}

std::string config_key_help() {
  const json defaults = default_config_json();
  std::ostringstream out;
  out << "Scenario config keys (JSON object, all optional):\n";
  for (const auto& [key, doc] : kKeyDocs) {
    out << "  " << key << " = " << defaults.at(key).dump() << "\n      " << doc << "\n";
  }
  return out.str();
}

}  // namespace fieldgen
