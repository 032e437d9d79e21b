#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fieldgen/errors.hpp"
#include "fieldgen/rollout.hpp"
#include "helpers.hpp"

using namespace fieldgen;

namespace {
constexpr double kPi = std::numbers::pi;

PreManipulationField make_field(double close = 0.01, std::optional<double> gain = std::nullopt) {
  return PreManipulationField(ConeField(Vec3::Zero(), UnitVector3(Vec3::UnitZ()), kPi / 6), Rotation::identity(),
                              gain, close);
}

Vec3 telescope(const Trajectory& t) {
  Vec3 p = t.waypoints.front().position;
  for (const auto& a : t.actions) p += a.position;
  return p;
}
}  // namespace

TEST_CASE("straight path of ten steps") {
  const Path3D path({Vec3(0, 0, 0.025), Vec3::Zero()});
  const Trajectory t = discretize(path, make_field(), Rotation::identity(), 0.0025);
  CHECK(t.waypoints.size() == 11);
  CHECK(t.actions.size() == 10);
  CHECK(t.gripper.size() == 11);
  for (const auto& a : t.actions) CHECK(a.position.norm() == doctest::Approx(0.0025).epsilon(1e-9));
  CHECK(t.waypoints.back().position.norm() < 1e-12);
}

TEST_CASE("chord spacing is exact except for the last step") {
  std::mt19937_64 gen(47);
  for (int i = 0; i < 50; ++i) {
    const ConeField cone(Vec3::Zero(), UnitVector3(test::random_unit(gen)), 0.6);
    const Vec3 start = test::random_vec(gen, -0.3, 0.3);
    const Path3D path = build_reach_path(cone, start, 1024);
    const auto pts = chord_resample(path, 0.0025);
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) CHECK(std::abs((pts[k] - pts[k - 1]).norm() - 0.0025) < 1e-12);
    const double last = (pts.back() - pts[pts.size() - 2]).norm();
    CHECK(last > 0.0);
    CHECK(last <= 0.0025 + 1e-12);
    CHECK((pts.back() - path.back()).norm() == 0.0);
  }
}

TEST_CASE("telescoped actions reconstruct the endpoint and rotations compose") {
  std::mt19937_64 gen(53);
  const auto field = make_field();
  for (int i = 0; i < 100; ++i) {
    const Vec3 start = test::random_vec(gen, -0.3, 0.3);
    const Rotation r0 = test::random_rotation(gen);
    const Trajectory t = discretize(build_reach_path(field.position, start, 512), field, r0, 0.0025);
    CHECK((telescope(t) - t.waypoints.back().position).norm() < 1e-8);
    Rotation r = t.waypoints.front().orientation;
    for (const auto& a : t.actions) r = r * rotation_exp(AxisAngle(a.rotation));
    CHECK((r.matrix() - t.waypoints.back().orientation.matrix()).norm() < 1e-8);
    CHECK(t.waypoints.back().orientation == field.goal_orientation);
  }
}

TEST_CASE("auto gain reaches 0.01 rad exactly at the last step") {
  const auto field = make_field();
  const Rotation r0 = rotation_exp(AxisAngle(Vec3(1.0, 0, 0)));
  const Trajectory t = discretize(Path3D({Vec3(0, 0, 0.1), Vec3::Zero()}), field, r0, 0.0025);
  const auto& pre = t.waypoints[t.waypoints.size() - 2].orientation;
  const double k = t.orientation_gain;
  CHECK(k == doctest::Approx(auto_orientation_gain(1.0, t.actions.size())));
  CHECK(rotation_angle(pre) == doctest::Approx(std::pow(1.0 - k, double(t.actions.size() - 1))).epsilon(1e-9));
  CHECK(rotation_angle(pre) * (1.0 - k) == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("gripper closes once within the close distance and stays closed") {
  const auto field = make_field(0.01);
  const Trajectory t = discretize(Path3D({Vec3(0, 0, 0.1), Vec3::Zero()}), field, Rotation::identity(), 0.0025);
  bool closed = false;
  for (std::size_t k = 0; k < t.waypoints.size(); ++k) {
    const double d = t.waypoints[k].position.norm();
    if (t.gripper[k] == Gripper::close) {
      CHECK(d <= 0.01 + 1e-12);
      closed = true;
    } else {
      CHECK_FALSE(closed);
      CHECK(d > 0.01 - 1e-12);
    }
  }
  CHECK(t.gripper.back() == Gripper::close);
  for (std::size_t k = 0; k < t.actions.size(); ++k) CHECK(t.actions[k].gripper == t.gripper[k + 1]);
}

TEST_CASE("coarse steps never close early") {
  const auto field = make_field(0.01);
  const Trajectory t = discretize(Path3D({Vec3(0, 0, 0.26), Vec3::Zero()}), field, Rotation::identity(), 0.05);
  for (std::size_t k = 0; k < t.waypoints.size(); ++k)
    if (t.gripper[k] == Gripper::close) CHECK(t.waypoints[k].position.norm() <= 0.01);
  CHECK(t.gripper[t.gripper.size() - 2] == Gripper::open);
  CHECK(t.gripper.back() == Gripper::close);
}

TEST_CASE("beta validation") {
  const Path3D path({Vec3(0, 0, 0.1), Vec3::Zero()});
  CHECK_THROWS_AS(discretize(path, make_field(), Rotation::identity(), 0.0), BetaError);
  CHECK_THROWS_AS(discretize(path, make_field(), Rotation::identity(), -1.0), BetaError);
  CHECK_THROWS_AS(discretize(path, make_field(), Rotation::identity(), 0.1), BetaError);
  CHECK_THROWS_AS(chord_resample(path, 0.2), BetaError);
}

TEST_CASE("step count for a quarter-meter path") {
  const Trajectory t =
      discretize(Path3D({Vec3(0, 0, 0.25), Vec3::Zero()}), make_field(), Rotation::identity(), 0.0025);
  CHECK(t.actions.size() >= 99);
  CHECK(t.actions.size() <= 101);
}

TEST_CASE("chunks are padded with zero motion holding the gripper") {
  const Trajectory t = discretize(Path3D({Vec3(0, 0, 0.1), Vec3::Zero()}), make_field(), Rotation::identity(), 0.0025);
  REQUIRE(t.actions.size() == 40);
  const auto starts = chunk_starts(t, kChunkSize);
  CHECK(starts == std::vector<std::size_t>{0, 30});
  const ActionChunk tail = extract_chunk(t, 30);
  for (std::size_t j = 0; j < 10; ++j) CHECK(tail[j].position == t.actions[30 + j].position);
  for (std::size_t j = 10; j < kChunkSize; ++j) {
    CHECK(tail[j].position == Vec3::Zero());
    CHECK(tail[j].rotation == Vec3::Zero());
    CHECK(tail[j].gripper == Gripper::close);
  }
  CHECK_THROWS_AS(extract_chunk(t, 40), std::out_of_range);
  CHECK(chunk_starts(t, 1).size() == 40);
}

TEST_CASE("fixed gain is honored") {
  const auto field = make_field(0.01, 0.5);
  const Rotation r0 = rotation_exp(AxisAngle(Vec3(0, 0.4, 0)));
  const Trajectory t = discretize(Path3D({Vec3(0, 0, 0.1), Vec3::Zero()}), field, r0, 0.0025);
  CHECK(t.orientation_gain == 0.5);
  CHECK(rotation_angle(t.waypoints[1].orientation) == doctest::Approx(0.2).epsilon(1e-10));
}
