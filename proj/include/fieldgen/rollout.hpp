#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "fieldgen/curve.hpp"
#include "fieldgen/field.hpp"

namespace fieldgen {

inline constexpr std::size_t kChunkSize = 30;

enum class Gripper : std::uint8_t { open = 0, close = 1 };

struct DeltaAction {
  Vec3 position = Vec3::Zero();      // m
  Vec3 rotation = Vec3::Zero();      // axis-angle, body frame, rad
  Gripper gripper = Gripper::open;   // command on arrival at the action's target waypoint
};

using ActionChunk = std::array<DeltaAction, kChunkSize>;

struct TrajectoryMeta {
  std::uint64_t seed = 0;
  CurveType curve = CurveType::cycloid;
  Pose start;
};

/**
 * Discretized reach trajectory.
 *
 * waypoints.size() == gripper.size() == actions.size() + 1. Action k moves
 * waypoint k to waypoint k + 1.
 */
struct Trajectory {
  std::vector<Pose> waypoints;
  std::vector<Gripper> gripper;
  std::vector<DeltaAction> actions;
  Vec3 goal = Vec3::Zero();
  double beta = 0.0;
  double orientation_gain = 1.0;
  TrajectoryMeta meta;

  std::vector<Vec3> positions() const;
};

/**
 * Walks the path in chord steps of exactly `beta` (the final step may be
 * shorter) and attaches orientations and gripper commands.
 *
 * Orientations follow orientation_step from start_orientation with the field
 * gain, or the auto-synchronized gain when the field leaves it unset; the final
 * waypoint takes the goal orientation. The gripper closes at the first waypoint
 * within the field's close distance of the path end and stays closed.
 *
 * Throws BetaError when beta <= 0 or beta >= path length.
 */
Trajectory discretize(const Path3D& path, const PreManipulationField& field, const Rotation& start_orientation,
                      double beta);

/// Chord-step resampling of a polyline. Exposed for baselines and tests.
std::vector<Vec3> chord_resample(const Path3D& path, double beta);

/// 30 actions from start_index; missing tail entries are zero-motion holding the last gripper command.
/// Throws std::out_of_range when start_index >= action count.
ActionChunk extract_chunk(const Trajectory& traj, std::size_t start_index);

/// 0, stride, 2 stride, ... below the action count.
std::vector<std::size_t> chunk_starts(const Trajectory& traj, std::size_t stride);

}  // namespace fieldgen
