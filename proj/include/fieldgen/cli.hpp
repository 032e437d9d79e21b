#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldgen/config.hpp"
#include "fieldgen/dataset.hpp"
#include "fieldgen/metrics.hpp"

namespace fieldgen {

/// Process exit codes of the fieldgen tool.
enum class ExitCode : int {
  ok = 0,
  internal = 1,    // unexpected failure
  usage = 2,       // bad command line
  config = 3,      // invalid scenario config
  generation = 4,  // degenerate start, bad beta
  dataset = 5,     // unreadable, corrupt or inconsistent dataset; write failure
};

struct GenerateSummary {
  std::uint64_t episodes = 0;
  std::uint64_t records = 0;
  std::uint64_t frames = 0;  // trajectory waypoints
  double seconds = 0.0;
  DatasetManifest manifest;
};

/// Job count from FIELDGEN_JOBS, else the hardware concurrency (at least 1).
unsigned default_jobs();

/// Generates cfg.total_episodes() episodes into `out`. Output does not depend on `jobs`.
GenerateSummary cmd_generate(const ScenarioConfig& cfg, const std::filesystem::path& out, unsigned jobs);

/// One waypoint polyline per episode, rebuilt from observation positions and chunk deltas (padding dropped).
std::vector<Polyline> polylines_from_records(const std::vector<SerializedRecord>& records);

struct CoverageComparison {
  std::vector<DiversityLevel> levels;
  std::vector<CoverageReport> reports;
  bool ordered = false;  // strictly decreasing high > middle > low over the levels present
};

/// Baselines of cfg.episodes trajectories per level; one shared cube when fixed_cube.
CoverageComparison compare_coverage(const ScenarioConfig& cfg, const std::vector<DiversityLevel>& levels,
                                    std::size_t resolution, bool fixed_cube);

struct CoverageRequest {
  std::optional<std::filesystem::path> dataset;
  std::size_t resolution = 16;
  bool fixed_cube = true;
  std::vector<DiversityLevel> compare;
};

nlohmann::json cmd_coverage(const ScenarioConfig& cfg, const CoverageRequest& req);

struct CurvePair {
  std::uint64_t seed = 0;
  double cycloid_curvature = 0.0;  // 1/m
  double bezier_curvature = 0.0;
  double cycloid_length = 0.0;     // m
  double bezier_length = 0.0;
  bool tie = false;
};

struct CurveAblation {
  std::vector<CurvePair> pairs;
  double cycloid_not_sharper = 0.0;  // fraction with cycloid curvature <= Bezier curvature
  double ci_low = 0.0;               // Wilson 95% interval of that fraction
  double ci_high = 0.0;
  std::size_t samples = 0;
};

/// Both curve types from one start toward the cone apex.
CurvePair compare_curves(const ConeField& field, const Vec3& start, std::size_t samples = 1024);

/// Start geometries from the scenario's start sampler; seeds 0..count-1 under cfg.master_seed.
CurveAblation ablate_curves(const ScenarioConfig& cfg, std::size_t count, std::size_t samples = 1024);
nlohmann::json cmd_ablate_curve(const ScenarioConfig& cfg, std::size_t count);

nlohmann::json cmd_inspect(const std::filesystem::path& dataset, std::size_t limit);

int run_cli(int argc, char** argv);

}  // namespace fieldgen
