#include "fieldgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fieldgen {

namespace {

AxisSpread spread(const std::vector<Vec3>& pts) {
  AxisSpread s;
  if (pts.empty()) return s;
  Vec3 mean = Vec3::Zero();
  Vec3 lo = pts.front();
  Vec3 hi = pts.front();
  for (const auto& p : pts) {
    mean += p;
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  mean /= static_cast<double>(pts.size());
  Vec3 var = Vec3::Zero();
  for (const auto& p : pts) var += (p - mean).cwiseAbs2();
  s.stddev = (var / static_cast<double>(pts.size())).cwiseSqrt();
  s.range = hi - lo;
  return s;
}

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

}  // namespace

std::vector<Polyline> polylines(std::span<const Trajectory> trajs) {
  std::vector<Polyline> out;
  out.reserve(trajs.size());
  for (const auto& t : trajs) out.push_back(t.positions());
  return out;
}

BoundingCube bounding_cube(std::span<const Polyline> sets) {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  bool any = false;
  for (const auto& line : sets) {
    for (const auto& p : line) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("bounding cube of an empty point set");
  BoundingCube cube;
  cube.edge = (hi - lo).maxCoeff();
  if (!(cube.edge > 0.0)) cube.edge = 1.0;
  cube.min = 0.5 * (lo + hi) - Vec3::Constant(0.5 * cube.edge);
  return cube;
}

VoxelGrid::VoxelGrid(const BoundingCube& cube, std::size_t resolution) : cube_(cube), n_(resolution) {
  if (resolution == 0) throw std::invalid_argument("voxel resolution must be at least 1");
  if (!(cube.edge > 0.0)) throw std::invalid_argument("voxel cube edge must be positive");
  cells_.assign(total(), 0);
}

Eigen::Vector3i VoxelGrid::cell_of(const Vec3& p) const {
  const double h = cube_.edge / static_cast<double>(n_);
  Eigen::Vector3i c;
  for (int i = 0; i < 3; ++i) {
    const double g = std::floor((p[i] - cube_.min[i]) / h);
    c[i] = static_cast<int>(std::clamp(g, 0.0, static_cast<double>(n_ - 1)));
  }
  return c;
}

void VoxelGrid::mark_cell(const Eigen::Vector3i& c) {
  auto& cell = cells_[index(c[0], c[1], c[2])];
  if (cell == 0) {
    cell = 1;
    ++occupied_;
  }
}

void VoxelGrid::mark_segment(const Vec3& a, const Vec3& b) {
  const double h = cube_.edge / static_cast<double>(n_);
  const Vec3 g0 = (a - cube_.min) / h;
  const Vec3 d = (b - a) / h;
  Eigen::Vector3i cell = cell_of(a);
  const Eigen::Vector3i last = cell_of(b);

  Eigen::Vector3i step;
  Vec3 t_max;
  Vec3 t_delta;
  int remaining = 0;
  for (int i = 0; i < 3; ++i) {
    step[i] = last[i] > cell[i] ? 1 : (last[i] < cell[i] ? -1 : 0);
    remaining += std::abs(last[i] - cell[i]);
    if (step[i] > 0) {
      t_max[i] = (cell[i] + 1 - g0[i]) / d[i];
      t_delta[i] = 1.0 / d[i];
    } else if (step[i] < 0) {
      t_max[i] = (cell[i] - g0[i]) / d[i];
      t_delta[i] = -1.0 / d[i];
    } else {
      t_max[i] = std::numeric_limits<double>::infinity();
      t_delta[i] = 0.0;
    }
  }

  mark_cell(cell);
  // Exactly one axis advances per crossing, and only toward the end cell.
  for (; remaining > 0; --remaining) {
    int axis = -1;
    for (int i = 0; i < 3; ++i) {
      if (cell[i] == last[i]) continue;
      if (axis < 0 || t_max[i] < t_max[axis]) axis = i;
    }
    cell[axis] += step[axis];
    t_max[axis] += t_delta[axis];
    mark_cell(cell);
  }
}

void VoxelGrid::mark_polyline(const Polyline& line) {
  if (line.empty()) return;
  if (line.size() == 1) {
    mark_point(line.front());
    return;
  }
  for (std::size_t i = 0; i + 1 < line.size(); ++i) mark_segment(line[i], line[i + 1]);
}

CoverageReport coverage(std::span<const Polyline> lines, std::size_t resolution, const BoundingCube& cube) {
  if (lines.empty()) throw std::invalid_argument("coverage of an empty trajectory set");
  const double slack = 1e-9 * cube.edge;
  VoxelGrid grid(cube, resolution);
  for (const auto& line : lines) {
    for (const auto& p : line) {
      if (((p - cube.min).array() < -slack).any() || ((p - cube.min).array() > cube.edge + slack).any()) {
        throw std::invalid_argument("trajectory point outside the coverage cube");
      }
    }
    grid.mark_polyline(line);
  }
  CoverageReport r;
  r.total = grid.total();
  r.occupied = grid.occupied();
  r.ratio = static_cast<double>(r.occupied) / static_cast<double>(r.total);
  r.resolution = resolution;
  r.cube = cube;
  return r;
}

CoverageReport coverage(std::span<const Polyline> lines, std::size_t resolution) {
  if (lines.empty()) throw std::invalid_argument("coverage of an empty trajectory set");
  return coverage(lines, resolution, bounding_cube(lines));
}

CoverageReport coverage(std::span<const Trajectory> trajs, std::size_t resolution) {
  const auto lines = polylines(trajs);
  return coverage(std::span<const Polyline>(lines), resolution);
}

double max_discrete_curvature(std::span<const Vec3> pts) {
  if (pts.size() < 3) throw std::invalid_argument("curvature needs at least three points");
  double best = 0.0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Vec3 a = pts[i] - pts[i - 1];
    const Vec3 b = pts[i + 1] - pts[i];
    const double la = a.norm();
    const double lb = b.norm();
    const double lc = (pts[i + 1] - pts[i - 1]).norm();
    if (la == 0.0 || lb == 0.0 || lc == 0.0) continue;
    const double cross = a.cross(b).norm();
    if (cross <= 1e-12 * la * lb) continue;
    best = std::max(best, 2.0 * cross / (la * lb * lc));
  }
  return best;
}

double max_discrete_curvature(const Path3D& path) { return max_discrete_curvature(std::span<const Vec3>(path.points())); }

DiversitySummary diversity_summary(std::span<const Polyline> lines) {
  if (lines.empty()) throw std::invalid_argument("diversity summary of an empty trajectory set");
  DiversitySummary s;
  s.trajectories = lines.size();
  std::vector<Vec3> starts;
  std::vector<Vec3> ends;
  s.xy_min = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  s.xy_max = -s.xy_min;
  for (const auto& line : lines) {
    if (line.empty()) throw std::invalid_argument("diversity summary of an empty trajectory");
    starts.push_back(line.front());
    ends.push_back(line.back());
    for (const auto& p : line) {
      const Eigen::Vector2d xy(p.x(), p.y());
      s.xy_scatter.push_back(xy);
      s.xy_min = s.xy_min.cwiseMin(xy);
      s.xy_max = s.xy_max.cwiseMax(xy);
    }
  }
  s.start = spread(starts);
  s.end = spread(ends);
  const BoundingCube cube = bounding_cube(lines);
  for (const std::size_t n : kSummaryResolutions) s.coverage.push_back(coverage(lines, n, cube));
  return s;
}

nlohmann::json to_json(const CoverageReport& r) {
  return {{"N", r.total},
          {"N_traversed", r.occupied},
          {"ratio", r.ratio},
          {"resolution", r.resolution},
          {"cube", {{"min", vec_json(r.cube.min)}, {"edge", r.cube.edge}}}};
}

nlohmann::json to_json(const DiversitySummary& s) {
  nlohmann::json cov = nlohmann::json::array();
  for (const auto& c : s.coverage) cov.push_back(to_json(c));
  auto spread_json = [](const AxisSpread& a) {
    return nlohmann::json{{"stddev", vec_json(a.stddev)}, {"range", vec_json(a.range)}};
  };
  return {{"trajectories", s.trajectories},
          {"start_spread", spread_json(s.start)},
          {"end_spread", spread_json(s.end)},
          {"coverage", cov},
          {"xy_bounds", {{"min", {s.xy_min.x(), s.xy_min.y()}}, {"max", {s.xy_max.x(), s.xy_max.y()}}}},
          {"xy_points", s.xy_scatter.size()}};
}

void write_scatter_csv(std::ostream& out, const DiversitySummary& summary) {
  out << "x,y\n";
  out.precision(17);
  for (const auto& p : summary.xy_scatter) out << p.x() << ',' << p.y() << '\n';
}

}  // namespace fieldgen
