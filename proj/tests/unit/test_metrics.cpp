#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include "fieldgen/metrics.hpp"
#include "helpers.hpp"

using namespace fieldgen;

namespace {
constexpr double kPi = std::numbers::pi;

// Slab test: does segment ab meet the closed box [lo, hi]?
bool segment_hits_box(const Vec3& a, const Vec3& b, const Vec3& lo, const Vec3& hi) {
  double t0 = 0.0, t1 = 1.0;
  const Vec3 d = b - a;
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) {
      if (a[k] < lo[k] || a[k] > hi[k]) return false;
      continue;
    }
    double e0 = (lo[k] - a[k]) / d[k], e1 = (hi[k] - a[k]) / d[k];
    if (e0 > e1) std::swap(e0, e1);
    t0 = std::max(t0, e0);
    t1 = std::min(t1, e1);
    if (t0 > t1) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("axis-aligned line covers one row of cells") {
  for (const std::size_t n : {1u, 2u, 5u, 16u, 33u}) {
    const std::vector<Polyline> lines{{Vec3(0, 0, 0), Vec3(1, 0, 0)}};
    const auto rep = coverage(lines, n);
    CHECK(rep.occupied == n);
    CHECK(rep.ratio == doctest::Approx(1.0 / double(n * n)));
  }
}

TEST_CASE("single point covers one cell") {
  const std::vector<Polyline> lines{{Vec3(0.3, 0.2, 0.1)}};
  const auto rep = coverage(lines, 16);
  CHECK(rep.occupied == 1);
  CHECK(rep.cube.edge == 1.0);
  CHECK(rep.ratio == doctest::Approx(1.0 / 4096.0));
}

TEST_CASE("resolution one is full coverage") {
  std::mt19937_64 gen(59);
  std::vector<Polyline> lines{{test::random_vec(gen, 0, 1), test::random_vec(gen, 0, 1)}};
  CHECK(coverage(lines, 1).ratio == 1.0);
  CHECK_THROWS_AS(coverage(lines, 0), std::invalid_argument);
  CHECK_THROWS_AS(coverage(std::vector<Polyline>{}, 8), std::invalid_argument);
}

TEST_CASE("minimum bounding cube") {
  const std::vector<Polyline> lines{{Vec3(0, 0, 0), Vec3(2, 1, 0)}};
  const auto cube = bounding_cube(lines);
  CHECK(cube.edge == 2.0);
  CHECK((cube.min - Vec3(0, -0.5, -1)).norm() < 1e-15);
}

TEST_CASE("segment traversal matches a per-cell intersection oracle") {
  std::mt19937_64 gen(61);
  const std::size_t n = 8;
  const BoundingCube cube{Vec3::Zero(), 1.0};
  for (int trial = 0; trial < 300; ++trial) {
    const Vec3 a = test::random_vec(gen, 0, 1), b = test::random_vec(gen, 0, 1);
    VoxelGrid grid(cube, n);
    grid.mark_segment(a, b);
    std::size_t expected = 0, mismatch = 0;
    const double h = 1.0 / n;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const Vec3 lo(i * h, j * h, k * h);
          const bool hit = segment_hits_box(a, b, lo, lo + Vec3::Constant(h));
          expected += hit;
          mismatch += hit != grid.is_occupied(i, j, k);
        }
    CHECK(mismatch == 0);
    CHECK(grid.occupied() == expected);
  }
}

TEST_CASE("fixed cube coverage never drops when trajectories are added") {
  std::mt19937_64 gen(67);
  const BoundingCube cube{Vec3::Zero(), 1.0};
  std::vector<Polyline> lines;
  std::size_t prev = 0;
  for (int i = 0; i < 30; ++i) {
    lines.push_back({test::random_vec(gen, 0, 1), test::random_vec(gen, 0, 1), test::random_vec(gen, 0, 1)});
    const auto rep = coverage(lines, 16, cube);
    CHECK(rep.occupied >= prev);
    prev = rep.occupied;
  }
  const std::vector<Polyline> outside{{Vec3(0.5, 0.5, 0.5), Vec3(1.5, 0.5, 0.5)}};
  CHECK_THROWS_AS(coverage(outside, 16, cube), std::invalid_argument);
}

TEST_CASE("coverage is invariant under translation and scaling") {
  std::mt19937_64 gen(71);
  std::vector<Polyline> lines;
  for (int i = 0; i < 10; ++i) lines.push_back({test::random_vec(gen, 0, 1), test::random_vec(gen, 0, 1)});
  std::vector<Polyline> moved = lines;
  for (auto& l : moved)
    for (auto& p : l) p = 4.0 * p + Vec3(-3, 7, 0.5);
  CHECK(coverage(lines, 16).occupied == coverage(moved, 16).occupied);
}

TEST_CASE("curvature of circles and lines") {
  for (const double rho : {0.05, 1.0, 20.0}) {
    std::vector<Vec3> pts;
    for (int i = 0; i < 100; ++i) pts.emplace_back(rho * std::cos(0.01 * i), rho * std::sin(0.01 * i), 0.0);
    CHECK(max_discrete_curvature(pts) == doctest::Approx(1.0 / rho).epsilon(1e-9));
  }
  const std::vector<Vec3> line{Vec3(0, 0, 0), Vec3(1, 1, 1), Vec3(2, 2, 2), Vec3(2, 2, 2)};
  CHECK(max_discrete_curvature(line) == 0.0);
  const std::vector<Vec3> two{Vec3::Zero(), Vec3::Ones()};
  CHECK_THROWS_AS(max_discrete_curvature(two), std::invalid_argument);
}

TEST_CASE("right-angle corner curvature") {
  // Triangle (0,0), (1,0), (1,1): circumradius sqrt(2)/2.
  const std::vector<Vec3> pts{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0)};
  CHECK(max_discrete_curvature(pts) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("curvature scales inversely with size") {
  std::mt19937_64 gen(73);
  std::vector<Vec3> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(test::random_vec(gen, -1, 1));
  std::vector<Vec3> big = pts;
  for (auto& p : big) p *= 3.0;
  CHECK(max_discrete_curvature(big) == doctest::Approx(max_discrete_curvature(pts) / 3.0).epsilon(1e-12));
}

TEST_CASE("diversity summary") {
  const std::vector<Polyline> lines{{Vec3(0, 0, 0), Vec3(1, 1, 1)}, {Vec3(2, 0, 0), Vec3(1, 1, 1)}};
  const auto s = diversity_summary(lines);
  CHECK(s.trajectories == 2);
  CHECK(s.start.stddev.x() == doctest::Approx(1.0));
  CHECK(s.start.range.x() == 2.0);
  CHECK(s.end.stddev.norm() == 0.0);
  REQUIRE(s.coverage.size() == 3);
  CHECK(s.coverage[0].resolution == 8);
  CHECK(s.coverage[2].resolution == 32);
  CHECK(s.coverage[0].cube.edge == s.coverage[2].cube.edge);
  CHECK(s.xy_min == Eigen::Vector2d(0, 0));
  CHECK(s.xy_max == Eigen::Vector2d(2, 1));
  std::ostringstream csv;
  write_scatter_csv(csv, s);
  CHECK(csv.str().find('\n') != std::string::npos);
  const auto j = to_json(s);
  CHECK(j.contains("coverage"));
}
