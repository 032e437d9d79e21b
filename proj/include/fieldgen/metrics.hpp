#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "fieldgen/curve.hpp"
#include "fieldgen/rollout.hpp"

namespace fieldgen {

using Polyline = std::vector<Vec3>;

std::vector<Polyline> polylines(std::span<const Trajectory> trajs);

/// Axis-aligned cube: min corner and edge length (m).
struct BoundingCube {
  Vec3 min = Vec3::Zero();
  double edge = 1.0;
};

/**
 * Minimum axis-aligned cube around all points: edge = largest extent of the
 * tight bounding box, centered on it. A zero extent falls back to a unit edge.
 */
BoundingCube bounding_cube(std::span<const Polyline> sets);

/// n^3 occupancy grid over a cube.
class VoxelGrid {
 public:
  VoxelGrid(const BoundingCube& cube, std::size_t resolution);

  const BoundingCube& cube() const { return cube_; }
  std::size_t resolution() const { return n_; }
  std::size_t total() const { return n_ * n_ * n_; }
  std::size_t occupied() const { return occupied_; }
  bool is_occupied(std::size_t i, std::size_t j, std::size_t k) const { return cells_[index(i, j, k)] != 0; }

  /// Cell containing p; points on the max faces belong to the last cell.
  Eigen::Vector3i cell_of(const Vec3& p) const;
  void mark_cell(const Eigen::Vector3i& c);
  void mark_point(const Vec3& p) { mark_cell(cell_of(p)); }
  /// Marks every cell the segment passes through (3D grid traversal).
  void mark_segment(const Vec3& a, const Vec3& b);
  void mark_polyline(const Polyline& line);

 private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * n_ + j) * n_ + k; }

  BoundingCube cube_;
  std::size_t n_;
  std::vector<std::uint8_t> cells_;
  std::size_t occupied_ = 0;
};

struct CoverageReport {
  std::size_t total = 0;     // N
  std::size_t occupied = 0;  // N'
  double ratio = 0.0;        // N' / N
  std::size_t resolution = 0;
  BoundingCube cube;
};

/// Coverage in the set's own minimum bounding cube. Throws std::invalid_argument on empty input.
CoverageReport coverage(std::span<const Polyline> lines, std::size_t resolution);
/// Coverage in a caller-fixed cube; every point must lie inside it.
CoverageReport coverage(std::span<const Polyline> lines, std::size_t resolution, const BoundingCube& cube);
CoverageReport coverage(std::span<const Trajectory> trajs, std::size_t resolution);

/**
 * Largest Menger curvature 4 * area / (product of sides) over consecutive
 * point triples, in 1/m. Collinear or duplicate triples contribute 0.
 * Throws std::invalid_argument for fewer than three points.
 */
double max_discrete_curvature(std::span<const Vec3> points);
double max_discrete_curvature(const Path3D& path);

struct AxisSpread {
  Vec3 stddev = Vec3::Zero();
  Vec3 range = Vec3::Zero();
};

struct DiversitySummary {
  std::size_t trajectories = 0;
  AxisSpread start;
  AxisSpread end;
  std::vector<CoverageReport> coverage;  // resolutions 8, 16, 32
  Eigen::Vector2d xy_min = Eigen::Vector2d::Zero();
  Eigen::Vector2d xy_max = Eigen::Vector2d::Zero();
  std::vector<Eigen::Vector2d> xy_scatter;
};

inline constexpr std::size_t kSummaryResolutions[] = {8, 16, 32};

DiversitySummary diversity_summary(std::span<const Polyline> lines);

nlohmann::json to_json(const CoverageReport& report);
/// Scatter points are left out; use write_scatter_csv.
nlohmann::json to_json(const DiversitySummary& summary);
void write_scatter_csv(std::ostream& out, const DiversitySummary& summary);

}  // namespace fieldgen
