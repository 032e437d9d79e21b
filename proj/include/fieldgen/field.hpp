#pragma once

#include <optional>

#include "fieldgen/so3.hpp"

namespace fieldgen {

// Absolute slack (meters) used when classifying points against the cone surface.
inline constexpr double kConeTolerance = 1e-12;

/// Position field: cone with apex at the goal, axis u, half-angle theta in (0, pi/2).
class ConeField {
 public:
  ConeField(const Vec3& goal, const UnitVector3& axis, double half_angle);

  const Vec3& goal() const { return goal_; }
  const UnitVector3& axis() const { return axis_; }
  double half_angle() const { return half_angle_; }
  double tan_half_angle() const { return tan_; }

  /// Same axis and aperture, apex moved.
  ConeField with_goal(const Vec3& goal) const { return ConeField(goal, axis_, half_angle_); }

 private:
  Vec3 goal_;
  UnitVector3 axis_;
  double half_angle_;
  double tan_;
};

/// Orientation field: geodesic contraction toward the goal rotation with gain in (0, 1].
class SphericalField {
 public:
  SphericalField(const Rotation& goal, double gain);

  const Rotation& goal() const { return goal_; }
  double gain() const { return gain_; }

 private:
  Rotation goal_;
  double gain_;
};

/**
 * Combined pre-manipulation field.
 *
 * The orientation gain is optional: when unset it is synchronized per
 * trajectory with auto_orientation_gain().
 */
struct PreManipulationField {
  PreManipulationField(const ConeField& position, const Rotation& goal_orientation,
                       std::optional<double> orientation_gain = std::nullopt,
                       double gripper_close_distance = 0.01);

  ConeField position;
  Rotation goal_orientation;
  std::optional<double> orientation_gain;
  double gripper_close_distance;
};

/// Boundary (r == tan(theta) a) counts as inside.
bool is_inside_cone(const ConeField& field, const Vec3& p);

/**
 * Moves an outside point along +u until it meets the cone surface.
 *
 * Throws DegenerateStartError when the point lies on the axis (r == 0) so the
 * radial direction is undefined, and std::invalid_argument for inside points.
 */
Vec3 project_onto_cone(const ConeField& field, const Vec3& p);

/// R_next = R_Q exp(-K_R log(R_G^T R_Q)).
Rotation orientation_step(const SphericalField& field, const Rotation& current);

/// Gain that brings a residual of initial_angle below 0.01 rad after `steps` steps.
double auto_orientation_gain(double initial_angle, std::size_t steps);

}  // namespace fieldgen
