#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fieldgen/curve.hpp"
#include "fieldgen/field.hpp"
#include "fieldgen/random.hpp"
#include "fieldgen/reward.hpp"
#include "fieldgen/rollout.hpp"

namespace fieldgen {

enum class DiversityLevel { low, middle, high };

std::string to_string(DiversityLevel level);
DiversityLevel parse_diversity_level(const std::string& name);

/// Axis-aligned start region plus the bound on the start orientation offset from the goal.
class WorkspaceBox {
 public:
  WorkspaceBox(const Vec3& min, const Vec3& max, double orientation_bound);

  const Vec3& min() const { return min_; }
  const Vec3& max() const { return max_; }
  double orientation_bound() const { return orientation_bound_; }
  Vec3 center() const { return 0.5 * (min_ + max_); }
  bool contains(const Vec3& p) const;

 private:
  Vec3 min_;
  Vec3 max_;
  double orientation_bound_;
};

struct GenerationSettings {
  CurveType curve = CurveType::cycloid;
  double beta = 0.0025;
  std::size_t chunk_stride = kChunkSize;
  std::size_t path_samples = 1024;
  RewardMode reward_mode = RewardMode::off;
  double reward_radius = 0.05;
  double baseline_jitter = 0.002;
};

struct Scenario {
  PreManipulationField field;
  WorkspaceBox workspace;
  GenerationSettings settings;
};

struct Observation {
  Pose pose;
  Gripper gripper = Gripper::open;
  std::uint64_t step = 0;
  std::uint64_t episode = 0;
};

struct Provenance {
  std::uint64_t seed = 0;
  CurveType curve = CurveType::cycloid;
  DiversityLevel level = DiversityLevel::high;
  double beta = 0.0;
};

struct EpisodeRecord {
  Observation observation;
  ActionChunk chunk;
  std::optional<double> reward;
  std::optional<std::string> image_path;
  Provenance provenance;
};

struct Episode {
  Trajectory trajectory;
  std::vector<EpisodeRecord> records;
  std::optional<RewardedEndpoint> endpoint;
};

/**
 * Start pose: position uniform in the box outside the ball |p - goal| <= close
 * distance (rejection sampling), orientation = R_G exp(angle * axis) with a
 * uniform axis and angle uniform on [0, bound].
 *
 * Throws GenerationError when the box lies entirely inside the exclusion ball.
 */
Pose sample_start_pose(const WorkspaceBox& box, const PreManipulationField& field, Rng& rng);
Pose sample_start_pose(const WorkspaceBox& box, const PreManipulationField& field, std::uint64_t seed);

/**
 * Builds the reach path toward the field goal (or the perturbed endpoint),
 * discretizes it and pairs each chunk-start observation with its action chunk.
 */
Episode generate_episode(const PreManipulationField& field, const Pose& start, const GenerationSettings& settings,
                         std::uint64_t episode_id, std::uint64_t seed,
                         const std::optional<RewardedEndpoint>& endpoint = std::nullopt);

/// One record per chunk start (stride apart), observation taken at the chunk's first waypoint.
std::vector<EpisodeRecord> make_records(const Trajectory& traj, std::uint64_t episode_id, std::size_t stride,
                                        const Provenance& provenance, std::optional<double> reward = std::nullopt);

/// Episode `index` of the scenario under `master_seed`; depends only on (scenario, master_seed, index).
Episode generate_indexed_episode(const Scenario& scenario, std::uint64_t master_seed, std::uint64_t index);

/**
 * Diversity baselines.
 *
 * low: one fixed start, straight line to the goal, Gaussian jitter on interior
 * waypoints. middle: sampled starts, straight lines to the goal. high: full
 * field episodes (reward perturbation disabled).
 */
std::vector<Trajectory> generate_baseline(DiversityLevel level, const Scenario& scenario, std::size_t count,
                                          std::uint64_t seed);

}  // namespace fieldgen
