#include "fieldgen/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fieldgen/errors.hpp"

namespace fieldgen {

namespace {
constexpr double kOrientationTarget = 0.01;  // rad
constexpr double kDegenerateRadial = 1e-12;  // m
}  // namespace

ConeField::ConeField(const Vec3& goal, const UnitVector3& axis, double half_angle)
    : goal_(goal), axis_(axis), half_angle_(half_angle), tan_(std::tan(half_angle)) {
  if (!goal.allFinite()) throw std::invalid_argument("cone goal is not finite");
  if (!(half_angle > 0.0 && half_angle < std::numbers::pi / 2)) {
    throw std::invalid_argument("cone half-angle must lie in (0, pi/2)");
  }
}

SphericalField::SphericalField(const Rotation& goal, double gain) : goal_(goal), gain_(gain) {
  if (!(gain > 0.0 && gain <= 1.0)) throw std::invalid_argument("orientation gain must lie in (0, 1]");
}

PreManipulationField::PreManipulationField(const ConeField& position, const Rotation& goal_orientation,
                                           std::optional<double> orientation_gain,
                                           double gripper_close_distance)
    : position(position),
      goal_orientation(goal_orientation),
      orientation_gain(orientation_gain),
      gripper_close_distance(gripper_close_distance) {
  if (orientation_gain) SphericalField(goal_orientation, *orientation_gain);  // validates the gain
  if (!(gripper_close_distance > 0.0)) throw std::invalid_argument("gripper close distance must be positive");
}

bool is_inside_cone(const ConeField& field, const Vec3& p) {
  const auto [a, r] = axial_radial_decompose(p, field.goal(), field.axis());
  return a >= -kConeTolerance && r <= field.tan_half_angle() * a + kConeTolerance;
}

Vec3 project_onto_cone(const ConeField& field, const Vec3& p) {
  if (is_inside_cone(field, p)) throw std::invalid_argument("project_onto_cone: point is already inside the cone");
  const Vec3& u = field.axis().vec();
  const Vec3 d = p - field.goal();
  const double a = u.dot(d);
  const Vec3 radial = d - a * u;
  if (radial.norm() < kDegenerateRadial) {
    throw DegenerateStartError("start lies on the negative cone axis; projection onto the cone is undefined");
  }
  return field.goal() + (radial.norm() / field.tan_half_angle()) * u + radial;
}

Rotation orientation_step(const SphericalField& field, const Rotation& current) {
  const AxisAngle w = rotation_log(field.goal().transpose() * current);
  return current * rotation_exp(AxisAngle(-field.gain() * w.vec()));
}

double auto_orientation_gain(double initial_angle, std::size_t steps) {
  if (steps == 0 || initial_angle <= kOrientationTarget) return 1.0;
  const double gain = 1.0 - std::pow(kOrientationTarget / initial_angle, 1.0 / static_cast<double>(steps));
  return std::clamp(gain, std::numeric_limits<double>::min(), 1.0);
}

}  // namespace fieldgen
