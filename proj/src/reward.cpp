#include <algorithm>
#include "fieldgen/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace fieldgen {

std::string to_string(RewardMode mode) {
  switch (mode) {
    case RewardMode::off: return "off";
    case RewardMode::uniform_reward: return "uniform_reward";
    case RewardMode::uniform_volume: return "uniform_volume";
  }
  return "off";
}

RewardMode parse_reward_mode(const std::string& name) {
  if (name == "off") return RewardMode::off;
  if (name == "uniform_reward") return RewardMode::uniform_reward;
  if (name == "uniform_volume") return RewardMode::uniform_volume;
  throw std::invalid_argument("unknown reward mode '" + name + "' (expected off, uniform_reward or uniform_volume)");
}

double reward_of(const Vec3& original, const Vec3& sampled, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("reward sphere radius must be positive");
  const double d = (original - sampled).norm();
  // Subtraction rounding can push a surface point a few ulps outside.
  if (d > radius * (1.0 + 1e-12)) throw std::domain_error("sampled endpoint lies outside the reward sphere");
  return std::max(0.0, 1.0 - d / radius);
}

RewardedEndpoint sample_rewarded_endpoint(const Vec3& original, double radius, Rng& rng, RewardMode mode) {
  if (!(radius > 0.0)) throw std::invalid_argument("reward sphere radius must be positive");
  if (mode == RewardMode::off) return {original, original, radius, 0.0, 1.0};
  const Vec3 dir = rng.unit_vector();
  const double u = rng.uniform();
  const double d = radius * (mode == RewardMode::uniform_volume ? std::cbrt(u) : u);
  RewardedEndpoint e;
  e.original = original;
  e.sampled = original + d * dir;
  e.radius = radius;
  e.distance = d;
  e.reward = 1.0 - d / radius;
  return e;
}

RewardedEndpoint sample_rewarded_endpoint(const Vec3& original, double radius, std::uint64_t seed, RewardMode mode) {
  Rng rng(seed);
  return sample_rewarded_endpoint(original, radius, rng, mode);
}

}  // namespace fieldgen
