#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fieldgen/curve.hpp"
#include "fieldgen/errors.hpp"
#include "fieldgen/metrics.hpp"
#include "helpers.hpp"

using namespace fieldgen;

namespace {
constexpr double kPi = std::numbers::pi;

// Arc length of the cycloid by composite Simpson on |c'(t)|.
double cycloid_length(double a0, double r0) {
  const double mu = a0 / kPi, nu = r0 / 2;
  auto speed = [&](double t) { return std::hypot(mu * (1 - std::cos(t)), nu * std::sin(t)); };
  const int n = 20000;
  const double h = kPi / n;
  double s = speed(0) + speed(kPi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * speed(i * h);
  return s * h / 3;
}

ConeField random_cone(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> ang(0.15, 1.3);
  return ConeField(test::random_vec(gen, -0.5, 0.5), UnitVector3(test::random_unit(gen)), ang(gen));
}
}  // namespace

TEST_CASE("planar cycloid endpoints and coefficients") {
  const PlanarCycloid c(0.2, 0.1);
  CHECK(c.mu() == doctest::Approx(0.2 / kPi));
  CHECK(c.nu() == doctest::Approx(0.05));
  CHECK(c.position(0).axial == 0.2);
  CHECK(c.position(0).radial == 0.1);
  CHECK(c.position(kPi).axial == 0.0);
  CHECK(c.position(kPi).radial == 0.0);
  CHECK(c.position(kPi / 2).axial == doctest::Approx(0.2 - (0.2 / kPi) * (kPi / 2 - 1)));
  CHECK(c.position(kPi / 2).radial == doctest::Approx(0.05));
  CHECK_THROWS_AS(c.position(-1e-3), std::domain_error);
  CHECK_THROWS_AS(c.position(kPi + 1e-3), std::domain_error);
}

TEST_CASE("cycloid stays in the cone it starts in") {
  // a(t) - r(t)/tan(theta) >= 0 on a dense t grid for starts on the surface.
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> ang(0.05, 1.5), len(0.01, 1.0);
  double worst = 0.0;
  for (int g = 0; g < 200; ++g) {
    const double theta = ang(gen);
    const double a0 = len(gen);
    const PlanarCycloid c(a0, std::tan(theta) * a0);
    for (int i = 0; i <= 10000; ++i) {
      const auto [a, r] = c.position(kPi * i / 10000.0);
      worst = std::min(worst, std::tan(theta) * a - r);
    }
  }
  CHECK(worst > -1e-12);
}

TEST_CASE("Path3D bookkeeping") {
  const Path3D p({Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(3, 4, 0), Vec3(3, 4, 12)});
  CHECK(p.size() == 3);
  CHECK(p.length() == doctest::Approx(17.0));
  CHECK(p.arc_length()[1] == doctest::Approx(5.0));
  CHECK_THROWS_AS(Path3D({Vec3::Ones(), Vec3::Ones()}), std::invalid_argument);
}

TEST_CASE("outside start: axial segment then cycloid, with quadrature length") {
  const ConeField cone(Vec3::Zero(), UnitVector3(Vec3::UnitZ()), kPi / 4);
  const Path3D path = build_reach_path(cone, Vec3(0.1, 0, 0), 4096);
  CHECK((path.points()[1] - Vec3(0.1, 0, 0.1)).norm() < 1e-12);
  CHECK(path.back().norm() < 1e-12);
  const double expected = 0.1 + cycloid_length(0.1, 0.1);
  CHECK(path.length() == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("reach paths end at the goal along the axis, planar and monotone") {
  std::mt19937_64 gen(37);
  for (int i = 0; i < 300; ++i) {
    const ConeField cone = random_cone(gen);
    const Vec3 start = cone.goal() + test::random_vec(gen, -0.4, 0.4);
    const Path3D path = build_reach_path(cone, start, 512);
    const auto& pts = path.points();
    const Vec3 u = cone.axis().vec();
    CHECK((path.back() - cone.goal()).norm() < 1e-9);
    CHECK((pts.back() - pts[pts.size() - 2]).normalized().cross(u).norm() < 1e-6);

    const Vec3 normal = (start - cone.goal()).cross(u);
    if (normal.norm() > 1e-6) {
      double off = 0.0;
      for (const Vec3& p : pts) off = std::max(off, std::abs((p - cone.goal()).dot(normal.normalized())));
      CHECK(off < 1e-10);
    }

    // From the first in-cone sample on, both coordinates shrink.
    std::size_t k = is_inside_cone(cone, start) ? 0 : 1;
    double pa = 1e300, pr = 1e300;
    for (; k < pts.size(); ++k) {
      const auto [a, r] = axial_radial_decompose(pts[k], cone.goal(), cone.axis());
      CHECK(a <= pa + 1e-12);
      CHECK(r <= pr + 1e-12);
      CHECK(is_inside_cone(cone, pts[k]));
      pa = a;
      pr = r;
    }
  }
}

TEST_CASE("start on the axis is a straight cycloid") {
  const ConeField cone(Vec3(1, 1, 1), UnitVector3(Vec3::UnitX()), 0.5);
  const Path3D path = build_reach_path(cone, Vec3(1.3, 1, 1), 64);
  CHECK(path.length() == doctest::Approx(0.3));
  CHECK_THROWS_AS(build_reach_path(cone, Vec3(1, 1, 1), 64), DegenerateStartError);
  CHECK_THROWS_AS(build_reach_path(cone, Vec3(0.5, 1, 1), 64), DegenerateStartError);
}

TEST_CASE("bezier path endpoints and terminal tangent") {
  std::mt19937_64 gen(41);
  for (int i = 0; i < 100; ++i) {
    const ConeField cone = random_cone(gen);
    const Vec3 start = cone.goal() + test::random_vec(gen, -0.4, 0.4);
    const Path3D path = build_bezier_path(cone, start, 1024);
    CHECK((path.front() - start).norm() < 1e-12);
    CHECK((path.back() - cone.goal()).norm() < 1e-12);
    const auto& pts = path.points();
    // Tangent at the end is -u: the curve arrives moving against the axis.
    CHECK((pts[pts.size() - 2] - pts.back()).normalized().dot(cone.axis().vec()) > 0.999);
  }
}

TEST_CASE("bezier midpoint matches the Bernstein form") {
  const ConeField cone(Vec3::Zero(), UnitVector3(Vec3::UnitZ()), 0.5);
  const Vec3 s(0.2, 0.1, 0.3);
  const Vec3 c1 = s + 0.4 * (cone.goal() - s);
  const Vec3 c2 = cone.goal() + 0.4 * s.norm() * Vec3::UnitZ();
  const Vec3 mid = 0.125 * s + 0.375 * c1 + 0.375 * c2 + 0.125 * cone.goal();
  const Path3D path = build_bezier_path(cone, s, 3);
  CHECK((path.points()[1] - mid).norm() < 1e-12);
}

TEST_CASE("curve type names") {
  CHECK(parse_curve_type("cycloid") == CurveType::cycloid);
  CHECK(parse_curve_type(to_string(CurveType::bezier)) == CurveType::bezier);
  CHECK_THROWS_AS(parse_curve_type("spline"), std::invalid_argument);
}

TEST_CASE("curvature comparison is reported") {
  std::mt19937_64 gen(43);
  int cycloid_wins = 0;
  const int n = 50;
  for (int i = 0; i < n; ++i) {
    const ConeField cone = random_cone(gen);
    const Vec3 start = cone.goal() + test::random_vec(gen, -0.4, 0.4);
    const double kc = max_discrete_curvature(build_reach_path(cone, start, 512));
    const double kb = max_discrete_curvature(build_bezier_path(cone, start, 512));
    cycloid_wins += kc <= kb + 1e-9;
  }
  MESSAGE("cycloid max curvature <= bezier in " << cycloid_wins << "/" << n << " geometries");
  CHECK(cycloid_wins >= 0);
}

TEST_CASE("cycloid evaluation is continuous across its two forms") {
  const PlanarCycloid c(0.37, 0.21);
  const double mid = kPi / 2;
  const auto lo = c.position(std::nextafter(mid, 0.0));
  const auto hi = c.position(std::nextafter(mid, 4.0));
  CHECK(std::abs(lo.axial - hi.axial) < 1e-15);
  CHECK(std::abs(lo.radial - hi.radial) < 1e-15);
  // Near the apex the reflected form keeps full relative precision.
  const double s = 1e-9;
  const auto near = c.position(kPi - s);
  CHECK(near.axial == doctest::Approx(c.mu() * 2 * s).epsilon(1e-12));
  CHECK(near.radial == doctest::Approx(c.nu() * s * s / 2).epsilon(1e-6));
}
