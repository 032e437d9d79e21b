#include "fieldgen/so3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fieldgen {

namespace {

constexpr double kDriftTolerance = 1e-8;
constexpr double kRejectTolerance = 1e-3;
constexpr double kSmallAngle = 1e-6;
// sin(angle) below this is indistinguishable from an exact half turn.
constexpr double kHalfTurnSine = 1e-13;

Vec3 vee(const Mat3& m) { return Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)) * 0.5; }

void canonicalize_half_turn_axis(Vec3& axis) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(axis[i]) > 1e-12) {
      if (axis[i] < 0.0) axis = -axis;
      return;
    }
  }
}

}  // namespace

UnitVector3::UnitVector3(const Vec3& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n == 0.0) throw std::invalid_argument("unit vector from zero or non-finite input");
  v_ = v / n;
}

Rotation Rotation::from_matrix(const Mat3& m) {
  if (!m.allFinite()) throw std::invalid_argument("rotation matrix has non-finite entries");
  const double drift = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (drift > kRejectTolerance || m.determinant() <= 0.0) {
    throw std::invalid_argument("matrix is not a proper rotation");
  }
  if (drift <= kDriftTolerance) return Rotation(m);
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return Rotation(svd.matrixU() * svd.matrixV().transpose());
}

Rotation Rotation::transpose() const { return Rotation(m_.transpose()); }

Rotation Rotation::operator*(const Rotation& other) const { return from_matrix(m_ * other.m_); }

Mat3 skew(const Vec3& v) {
  Mat3 k;
  k << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return k;
}

Rotation rotation_exp(const AxisAngle& w) {
  const Vec3& v = w.vec();
  if (!v.allFinite()) throw std::invalid_argument("rotation_exp: non-finite rotation vector");
  const double theta = v.norm();
  const Mat3 k = skew(v);
  double a;  // sin(theta) / theta
  double b;  // (1 - cos(theta)) / theta^2
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Rotation::from_matrix(Mat3::Identity() + a * k + b * k * k);
}

AxisAngle rotation_log(const Rotation& r) {
  const Mat3& m = r.matrix();
  const double c = std::clamp((m.trace() - 1.0) * 0.5, -1.0, 1.0);
  const Vec3 v = vee(m);  // sin(theta) * axis
  const double s = v.norm();
  const double theta = std::atan2(s, c);

  if (theta < kSmallAngle) return AxisAngle(v * (1.0 + theta * theta / 6.0));
  if (theta < std::numbers::pi - 1e-3) return AxisAngle(v * (theta / s));

  // Near a half turn the skew part carries little information; recover the
  // axis from the symmetric part (1 - cos) n n^T and take its sign from v.
  const Mat3 sym = 0.5 * (m + m.transpose()) - c * Mat3::Identity();
  int k = 0;
  sym.diagonal().maxCoeff(&k);
  Vec3 axis = sym.col(k) / std::sqrt(std::max(sym(k, k), 0.0) * (1.0 - c));
  axis.normalize();
  if (s < kHalfTurnSine) {
    canonicalize_half_turn_axis(axis);
  } else if (axis.dot(v) < 0.0) {
    axis = -axis;
  }
  return AxisAngle(axis * theta);
}

double rotation_angle(const Rotation& r) { return rotation_log(r).angle(); }

AxialRadial axial_radial_decompose(const Vec3& p, const Vec3& goal, const UnitVector3& axis) {
  const Vec3 d = p - goal;
  const double a = axis.vec().dot(d);
  return {a, (d - a * axis.vec()).norm()};
}

}  // namespace fieldgen
