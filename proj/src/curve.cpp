#include "fieldgen/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fieldgen/errors.hpp"

namespace fieldgen {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBezierSpan = 0.4;
constexpr double kAxialOnly = 1e-12;  // radial offset treated as zero (m)

std::vector<Vec3> cycloid_points(const Vec3& goal, const Vec3& axis, const Vec3& start, std::size_t samples) {
  const Vec3 d = start - goal;
  const double a0 = axis.dot(d);
  const Vec3 radial = d - a0 * axis;
  const double r0 = radial.norm();
  const bool on_axis = r0 < kAxialOnly;
  const Vec3 e_r = on_axis ? Vec3::Zero() : Vec3(radial / r0);
  const PlanarCycloid curve(a0, on_axis ? 0.0 : r0);

  std::vector<double> ts;
  ts.reserve(samples + 1);
  for (std::size_t i = 0; i + 1 < samples; ++i) ts.push_back(kPi * static_cast<double>(i) / static_cast<double>(samples - 1));
  if (!on_axis) {
    // With s = pi - t the last segment has length ~ 2 a0 s / pi and leans off u by
    // ~ (pi/8)(r0/a0) s. Rounding of absolute coordinates adds ~ err / length, so s
    // balances the two, capped so the geometric lean stays below 2.5e-7.
    const double err = 4.0 * std::numeric_limits<double>::epsilon() *
                       (goal.cwiseAbs().maxCoeff() + std::abs(a0) + r0);
    const double dt = std::min({6.4e-7 * a0 / r0, 2.0 * std::sqrt(err / r0), 1e-2});
    if (kPi - dt > ts.back()) ts.push_back(kPi - dt);
  }
  ts.push_back(kPi);

  std::vector<Vec3> pts;
  pts.reserve(ts.size());
  pts.push_back(start);
  for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
    const auto [a, r] = curve.position(ts[i]);
    pts.push_back(goal + a * axis + r * e_r);
  }
  pts.push_back(goal);
  return pts;
}

}  // namespace

std::string to_string(CurveType type) { return type == CurveType::cycloid ? "cycloid" : "bezier"; }

CurveType parse_curve_type(const std::string& name) {
  if (name == "cycloid") return CurveType::cycloid;
  if (name == "bezier") return CurveType::bezier;
  throw std::invalid_argument("unknown curve type '" + name + "' (expected cycloid or bezier)");
}

PlanarCycloid::PlanarCycloid(double start_axial, double start_radial)
    : a0_(start_axial), r0_(start_radial), mu_(start_axial / kPi), nu_(start_radial / 2.0) {}

AxialRadial PlanarCycloid::position(double t) const {
  if (!(t >= 0.0 && t <= kPi)) throw std::domain_error("cycloid parameter outside [0, pi]");
  if (t == 0.0) return {a0_, r0_};
  if (t == kPi) return {0.0, 0.0};
  if (t <= 0.5 * kPi) return {a0_ - mu_ * (t - std::sin(t)), r0_ - nu_ * (1.0 - std::cos(t))};
  // Same curve measured from the end; avoids cancellation near the apex.
  const double s = kPi - t;
  const double h = std::sin(0.5 * s);
  return {mu_ * (s + std::sin(s)), 2.0 * nu_ * h * h};
}

Path3D::Path3D(std::vector<Vec3> points) {
  points_.reserve(points.size());
  for (auto& p : points) {
    if (!p.allFinite()) throw std::invalid_argument("path point is not finite");
    if (points_.empty() || (p - points_.back()).norm() > 0.0) points_.push_back(p);
  }
  if (points_.size() < 2) throw std::invalid_argument("path needs at least two distinct points");
  arc_.resize(points_.size());
  arc_[0] = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) arc_[i] = arc_[i - 1] + (points_[i] - points_[i - 1]).norm();
}

Path3D build_reach_path(const ConeField& field, const Vec3& start, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("build_reach_path: need at least two samples");
  if ((start - field.goal()).norm() == 0.0) throw DegenerateStartError("start coincides with the goal");
  const Vec3& u = field.axis().vec();
  if (is_inside_cone(field, start)) return Path3D(cycloid_points(field.goal(), u, start, samples));

  const Vec3 entry = project_onto_cone(field, start);
  std::vector<Vec3> pts{start};
  const auto inner = cycloid_points(field.goal(), u, entry, samples);
  pts.insert(pts.end(), inner.begin(), inner.end());
  return Path3D(std::move(pts));
}

Path3D build_bezier_path(const ConeField& field, const Vec3& start, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("build_bezier_path: need at least two samples");
  const Vec3& goal = field.goal();
  const double span = (goal - start).norm();
  if (span == 0.0) throw DegenerateStartError("start coincides with the goal");
  const Vec3 c1 = start + kBezierSpan * (goal - start);
  const Vec3 c2 = goal + kBezierSpan * span * field.axis().vec();

  std::vector<Vec3> pts;
  pts.reserve(samples);
  pts.push_back(start);
  for (std::size_t i = 1; i + 1 < samples; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(samples - 1);
    const double m = 1.0 - s;
    pts.push_back(m * m * m * start + 3.0 * m * m * s * c1 + 3.0 * m * s * s * c2 + s * s * s * goal);
  }
  pts.push_back(goal);
  return Path3D(std::move(pts));
}

Path3D build_path(CurveType type, const ConeField& field, const Vec3& start, std::size_t samples) {
  return type == CurveType::cycloid ? build_reach_path(field, start, samples)
                                    : build_bezier_path(field, start, samples);
}

}  // namespace fieldgen
