#pragma once

#include <Eigen/Dense>

namespace fieldgen {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Direction in R^3, normalized on construction.
class UnitVector3 {
 public:
  /// Throws std::invalid_argument for zero-length or non-finite input.
  explicit UnitVector3(const Vec3& v);

  const Vec3& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }

 private:
  Vec3 v_;
};

/**
 * Element of SO(3) stored as an orthonormal 3x3 matrix.
 *
 * Matrices whose orthonormality error exceeds 1e-8 are projected back onto
 * SO(3) (polar decomposition) when a Rotation is formed, so products over long
 * rollouts do not drift. Matrices with negative determinant are rejected.
 */
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  /// Throws std::invalid_argument if m is not (close to) a proper rotation.
  static Rotation from_matrix(const Mat3& m);
  static Rotation identity() { return Rotation(); }

  const Mat3& matrix() const { return m_; }
  Rotation transpose() const;
  Rotation operator*(const Rotation& other) const;
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  bool operator==(const Rotation& other) const { return m_ == other.m_; }

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

/// Rotation vector: direction is the axis, norm is the angle in radians.
class AxisAngle {
 public:
  AxisAngle() : w_(Vec3::Zero()) {}
  explicit AxisAngle(const Vec3& w) : w_(w) {}

  const Vec3& vec() const { return w_; }
  double angle() const { return w_.norm(); }

 private:
  Vec3 w_;
};

struct Pose {
  Vec3 position = Vec3::Zero();
  Rotation orientation;
};

struct AxialRadial {
  double axial = 0.0;   // a = u^T (p - g)
  double radial = 0.0;  // r = |(p - g) - a u|
};

Mat3 skew(const Vec3& v);

/// Rodrigues formula; exp(0) = I.
Rotation rotation_exp(const AxisAngle& w);

/**
 * Canonical logarithm with angle in [0, pi].
 *
 * Below 1e-6 rad a series expansion is used. At an angle of exactly pi the
 * axis sign is fixed so that its first nonzero component is positive.
 */
AxisAngle rotation_log(const Rotation& r);

/// Geodesic distance to identity, in [0, pi].
double rotation_angle(const Rotation& r);

AxialRadial axial_radial_decompose(const Vec3& p, const Vec3& goal, const UnitVector3& axis);

}  // namespace fieldgen
