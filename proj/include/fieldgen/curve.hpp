#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fieldgen/field.hpp"

namespace fieldgen {

enum class CurveType { cycloid, bezier };

std::string to_string(CurveType type);
/// Throws std::invalid_argument on unknown names.
CurveType parse_curve_type(const std::string& name);

/**
 * Half-cycloid in the (axial, radial) plane, written as remaining distance to
 * the goal:
 *
 *   a(t) = a0 - mu (t - sin t),   r(t) = r0 - nu (1 - cos t),   t in [0, pi]
 *
 * with mu = a0 / pi and nu = r0 / 2, so the curve starts at (a0, r0), ends at
 * the origin, and arrives with a purely axial tangent.
 */
class PlanarCycloid {
 public:
  PlanarCycloid(double start_axial, double start_radial);

  double start_axial() const { return a0_; }
  double start_radial() const { return r0_; }
  double mu() const { return mu_; }
  double nu() const { return nu_; }

  /// Throws std::domain_error for t outside [0, pi].
  AxialRadial position(double t) const;

 private:
  double a0_;
  double r0_;
  double mu_;
  double nu_;
};

/// Polyline with strictly increasing arc length.
class Path3D {
 public:
  /// Consecutive duplicate points are dropped. Throws std::invalid_argument if
  /// fewer than two distinct points remain.
  explicit Path3D(std::vector<Vec3> points);

  const std::vector<Vec3>& points() const { return points_; }
  /// Cumulative arc length at each point; front() == 0, back() == length().
  const std::vector<double>& arc_length() const { return arc_; }
  double length() const { return arc_.back(); }
  const Vec3& front() const { return points_.front(); }
  const Vec3& back() const { return points_.back(); }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Vec3> points_;
  std::vector<double> arc_;
};

/**
 * Reach path from `start` to the cone apex.
 *
 * Inside the cone: the half-cycloid embedded in the plane of (goal, start, u).
 * Outside: the axial segment start -> P (projection onto the cone) followed
 * by the half-cycloid P -> goal. `samples` is the number of cycloid samples,
 * uniform in t; one extra sample is placed just before t = pi so the final
 * segment is aligned with the axis to better than 1e-6.
 */
Path3D build_reach_path(const ConeField& field, const Vec3& start, std::size_t samples);

/**
 * Cubic Bezier from `start` to the apex with control points
 * c1 = start + 0.4 (goal - start) and c2 = goal + 0.4 |goal - start| u,
 * sampled uniformly in the curve parameter.
 */
Path3D build_bezier_path(const ConeField& field, const Vec3& start, std::size_t samples);

Path3D build_path(CurveType type, const ConeField& field, const Vec3& start, std::size_t samples);

}  // namespace fieldgen
