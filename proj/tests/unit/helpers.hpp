#pragma once

#include <Eigen/Geometry>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "fieldgen/so3.hpp"

namespace fieldgen::test {

// Uniform random rotation built through a unit quaternion (Shoemake), independent of rotation_exp.
inline Rotation random_rotation(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double u1 = u(gen), u2 = u(gen), u3 = u(gen);
  const double two_pi = 2.0 * 3.14159265358979323846;
  Eigen::Quaterniond q(std::sqrt(u1) * std::cos(two_pi * u3), std::sqrt(1 - u1) * std::sin(two_pi * u2),
                       std::sqrt(1 - u1) * std::cos(two_pi * u2), std::sqrt(u1) * std::sin(two_pi * u3));
  return Rotation::from_matrix(q.normalized().toRotationMatrix());
}

inline Vec3 random_vec(std::mt19937_64& gen, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return Vec3(u(gen), u(gen), u(gen));
}

inline Vec3 random_unit(std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  return Vec3(n(gen), n(gen), n(gen)).normalized();
}

inline double frobenius(const Mat3& a, const Mat3& b) { return (a - b).norm(); }

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("fieldgen_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fieldgen::test
