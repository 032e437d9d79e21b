#include "fieldgen/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fieldgen/errors.hpp"

namespace fieldgen {

namespace {

// A final step shorter than this snaps onto the path end instead of adding a waypoint.
constexpr double kSnapDistance = 1e-9;

// Exit point of the segment [a, b] from the ball |x - c| < beta, given a inside.
Vec3 sphere_exit(const Vec3& c, const Vec3& a, const Vec3& b, double beta) {
  const Vec3 d = b - a;
  const Vec3 f = a - c;
  const double qa = d.squaredNorm();
  const double qb = 2.0 * f.dot(d);
  const double qc = f.squaredNorm() - beta * beta;
  const double disc = std::max(qb * qb - 4.0 * qa * qc, 0.0);
  // qc <= 0, so the larger root is the exit; this form avoids cancellation.
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  if (q == 0.0) return a;
  const double s = std::max(q / qa, qc / q);
  return a + std::clamp(s, 0.0, 1.0) * d;
}

}  // namespace

std::vector<Vec3> Trajectory::positions() const {
  std::vector<Vec3> out;
  out.reserve(waypoints.size());
  for (const auto& w : waypoints) out.push_back(w.position);
  return out;
}

std::vector<Vec3> chord_resample(const Path3D& path, double beta) {
  if (!(beta > 0.0)) throw BetaError("beta must be positive");
  if (beta >= path.length()) {
    std::ostringstream msg;
    msg << "beta " << beta << " m is not smaller than the path length " << path.length() << " m";
    throw BetaError(msg.str());
  }
  const auto& pts = path.points();
  std::vector<Vec3> out{pts.front()};
  out.reserve(static_cast<std::size_t>(path.length() / beta) + 4);

  Vec3 cur = pts.front();
  std::size_t seg = 0;  // cur lies on segment [pts[seg], pts[seg + 1]]
  Vec3 seg_start = cur;
  while (true) {
    bool found = false;
    for (std::size_t j = seg; j + 1 < pts.size(); ++j) {
      const Vec3& a = (j == seg) ? seg_start : pts[j];
      if ((pts[j + 1] - cur).norm() >= beta) {
        cur = sphere_exit(cur, a, pts[j + 1], beta);
        seg = j;
        seg_start = cur;
        found = true;
        break;
      }
    }
    if (!found) break;
    out.push_back(cur);
  }
  if ((pts.back() - out.back()).norm() <= kSnapDistance && out.size() > 1) {
    out.back() = pts.back();
  } else {
    out.push_back(pts.back());
  }
  return out;
}

Trajectory discretize(const Path3D& path, const PreManipulationField& field, const Rotation& start_orientation,
                      double beta) {
  Trajectory traj;
  traj.beta = beta;
  traj.goal = path.back();
  const std::vector<Vec3> positions = chord_resample(path, beta);
  const std::size_t steps = positions.size() - 1;

  const Rotation& goal_r = field.goal_orientation;
  const double gain = field.orientation_gain.value_or(
      auto_orientation_gain(rotation_angle(goal_r.transpose() * start_orientation), steps));
  traj.orientation_gain = gain;
  const SphericalField ori(goal_r, gain);

  traj.waypoints.reserve(positions.size());
  traj.gripper.reserve(positions.size());
  Rotation r = start_orientation;
  bool closed = false;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (k == steps) {
      r = goal_r;
    } else if (k > 0) {
      r = orientation_step(ori, r);
    }
    closed = closed || (positions[k] - traj.goal).norm() <= field.gripper_close_distance;
    traj.waypoints.push_back({positions[k], r});
    traj.gripper.push_back(closed ? Gripper::close : Gripper::open);
  }

  traj.actions.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const Pose& from = traj.waypoints[k];
    const Pose& to = traj.waypoints[k + 1];
    traj.actions.push_back({to.position - from.position,
                            rotation_log(from.orientation.transpose() * to.orientation).vec(),
                            traj.gripper[k + 1]});
  }
  traj.meta.start = traj.waypoints.front();
  return traj;
}

ActionChunk extract_chunk(const Trajectory& traj, std::size_t start_index) {
  if (start_index >= traj.actions.size()) throw std::out_of_range("extract_chunk: start index past the last action");
  ActionChunk chunk;
  const std::size_t n = std::min(kChunkSize, traj.actions.size() - start_index);
  for (std::size_t i = 0; i < n; ++i) chunk[i] = traj.actions[start_index + i];
  const Gripper hold = chunk[n - 1].gripper;
  for (std::size_t i = n; i < kChunkSize; ++i) chunk[i] = DeltaAction{Vec3::Zero(), Vec3::Zero(), hold};
  return chunk;
}

std::vector<std::size_t> chunk_starts(const Trajectory& traj, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("chunk stride must be positive");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < traj.actions.size(); i += stride) out.push_back(i);
  return out;
}

}  // namespace fieldgen
