#include "fieldgen/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fieldgen/errors.hpp"

namespace fieldgen {

namespace {

constexpr std::uint64_t kStartStream = 0;
constexpr std::uint64_t kRewardStream = 1;
constexpr int kMaxRejections = 100000;

bool box_inside_ball(const WorkspaceBox& box, const Vec3& center, double radius) {
  Vec3 far;
  for (int i = 0; i < 3; ++i) {
    far[i] = std::max(std::abs(box.min()[i] - center[i]), std::abs(box.max()[i] - center[i]));
  }
  return far.norm() <= radius;
}

Trajectory straight_trajectory(const PreManipulationField& field, const Pose& start, double beta) {
  const Path3D path({start.position, field.position.goal()});
  return discretize(path, field, start.orientation, beta);
}

}  // namespace

std::string to_string(DiversityLevel level) {
  switch (level) {
    case DiversityLevel::low: return "low";
    case DiversityLevel::middle: return "middle";
    case DiversityLevel::high: return "high";
  }
  return "high";
}

DiversityLevel parse_diversity_level(const std::string& name) {
  if (name == "low") return DiversityLevel::low;
  if (name == "middle") return DiversityLevel::middle;
  if (name == "high") return DiversityLevel::high;
  throw std::invalid_argument("unknown diversity level '" + name + "' (expected low, middle or high)");
}

WorkspaceBox::WorkspaceBox(const Vec3& min, const Vec3& max, double orientation_bound)
    : min_(min), max_(max), orientation_bound_(orientation_bound) {
  if (!min.allFinite() || !max.allFinite() || !(min.array() < max.array()).all()) {
    throw std::invalid_argument("workspace box needs min < max on every axis");
  }
  if (!(orientation_bound >= 0.0)) throw std::invalid_argument("orientation perturbation bound must be >= 0");
}

bool WorkspaceBox::contains(const Vec3& p) const {
  return (p.array() >= min_.array()).all() && (p.array() <= max_.array()).all();
}

Pose sample_start_pose(const WorkspaceBox& box, const PreManipulationField& field, Rng& rng) {
  const Vec3& goal = field.position.goal();
  const double exclusion = field.gripper_close_distance;
  if (box_inside_ball(box, goal, exclusion)) {
    throw GenerationError("workspace box lies inside the gripper-close ball around the goal");
  }
  Pose pose;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kMaxRejections) throw GenerationError("could not sample a start outside the gripper-close ball");
    Vec3 p;
    for (int i = 0; i < 3; ++i) p[i] = rng.uniform(box.min()[i], box.max()[i]);
    if ((p - goal).norm() > exclusion) {
      pose.position = p;
      break;
    }
  }
  const Vec3 axis = rng.unit_vector();
  const double angle = box.orientation_bound() * rng.uniform();
  pose.orientation = box.orientation_bound() == 0.0
                         ? field.goal_orientation
                         : field.goal_orientation * rotation_exp(AxisAngle(angle * axis));
  return pose;
}

Pose sample_start_pose(const WorkspaceBox& box, const PreManipulationField& field, std::uint64_t seed) {
  Rng rng(seed);
  return sample_start_pose(box, field, rng);
}

Episode generate_episode(const PreManipulationField& field, const Pose& start, const GenerationSettings& settings,
                         std::uint64_t episode_id, std::uint64_t seed,
                         const std::optional<RewardedEndpoint>& endpoint) {
  PreManipulationField target = field;
  if (endpoint) target.position = field.position.with_goal(endpoint->sampled);

  const Path3D path = build_path(settings.curve, target.position, start.position, settings.path_samples);
  Episode ep;
  ep.endpoint = endpoint;
  ep.trajectory = discretize(path, target, start.orientation, settings.beta);
  ep.trajectory.meta = {seed, settings.curve, start};

  const Provenance prov{seed, settings.curve, DiversityLevel::high, settings.beta};
  ep.records = make_records(ep.trajectory, episode_id, settings.chunk_stride, prov,
                            endpoint ? std::optional<double>(endpoint->reward) : std::nullopt);
  return ep;
}

std::vector<EpisodeRecord> make_records(const Trajectory& traj, std::uint64_t episode_id, std::size_t stride,
                                        const Provenance& provenance, std::optional<double> reward) {
  std::vector<EpisodeRecord> out;
  for (const std::size_t k : chunk_starts(traj, stride)) {
    EpisodeRecord rec;
    rec.observation = {traj.waypoints[k], traj.gripper[k], k, episode_id};
    rec.chunk = extract_chunk(traj, k);
    rec.reward = reward;
    rec.provenance = provenance;
    out.push_back(std::move(rec));
  }
  return out;
}

Episode generate_indexed_episode(const Scenario& scenario, std::uint64_t master_seed, std::uint64_t index) {
  const std::uint64_t seed = derive_seed(master_seed, index);
  Rng start_rng(derive_seed(seed, kStartStream));
  const Pose start = sample_start_pose(scenario.workspace, scenario.field, start_rng);

  std::optional<RewardedEndpoint> endpoint;
  const auto& s = scenario.settings;
  if (s.reward_mode != RewardMode::off) {
    Rng reward_rng(derive_seed(seed, kRewardStream));
    endpoint = sample_rewarded_endpoint(scenario.field.position.goal(), s.reward_radius, reward_rng, s.reward_mode);
  }
  return generate_episode(scenario.field, start, s, index, seed, endpoint);
}

std::vector<Trajectory> generate_baseline(DiversityLevel level, const Scenario& scenario, std::size_t count,
                                          std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("baseline count must be at least 1");
  const auto& field = scenario.field;
  const auto& s = scenario.settings;
  std::vector<Trajectory> out;
  out.reserve(count);

  switch (level) {
    case DiversityLevel::low: {
      const Pose start = sample_start_pose(scenario.workspace, field, derive_seed(derive_seed(seed, 0), kStartStream));
      const Trajectory base = straight_trajectory(field, start, s.beta);
      for (std::size_t i = 0; i < count; ++i) {
        Trajectory t = base;
        t.meta = {derive_seed(seed, i), CurveType::cycloid, start};
        Rng rng(t.meta.seed);
        for (std::size_t k = 1; k + 1 < t.waypoints.size(); ++k) {
          t.waypoints[k].position += s.baseline_jitter * Vec3(rng.normal(), rng.normal(), rng.normal());
        }
        for (std::size_t k = 0; k < t.actions.size(); ++k) {
          t.actions[k].position = t.waypoints[k + 1].position - t.waypoints[k].position;
        }
        out.push_back(std::move(t));
      }
      break;
    }
    case DiversityLevel::middle:
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t ep_seed = derive_seed(seed, i);
        const Pose start = sample_start_pose(scenario.workspace, field, derive_seed(ep_seed, kStartStream));
        Trajectory t = straight_trajectory(field, start, s.beta);
        t.meta = {ep_seed, CurveType::cycloid, start};
        out.push_back(std::move(t));
      }
      break;
    case DiversityLevel::high: {
      Scenario plain = scenario;
      plain.settings.reward_mode = RewardMode::off;
      for (std::size_t i = 0; i < count; ++i) out.push_back(generate_indexed_episode(plain, seed, i).trajectory);
      break;
    }
  }
  return out;
}

}  // namespace fieldgen
