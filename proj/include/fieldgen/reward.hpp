#pragma once

#include <cstdint>
#include <string>

#include "fieldgen/random.hpp"
#include "fieldgen/so3.hpp"

namespace fieldgen {

/**
 * Endpoint sampling law.
 *
 * uniform_reward draws the offset distance uniformly on [0, R], which makes
 * reward = 1 - d/R uniform on [0, 1]. uniform_volume draws the endpoint
 * uniformly in the ball, giving reward density 3 (1 - reward)^2.
 */
enum class RewardMode { off, uniform_reward, uniform_volume };

std::string to_string(RewardMode mode);
RewardMode parse_reward_mode(const std::string& name);

struct RewardedEndpoint {
  Vec3 original = Vec3::Zero();
  Vec3 sampled = Vec3::Zero();
  double radius = 0.0;
  double distance = 0.0;
  double reward = 1.0;
};

/// 1 - |original - sampled| / radius. Throws std::domain_error outside the ball.
double reward_of(const Vec3& original, const Vec3& sampled, double radius);

RewardedEndpoint sample_rewarded_endpoint(const Vec3& original, double radius, Rng& rng,
                                          RewardMode mode = RewardMode::uniform_reward);
RewardedEndpoint sample_rewarded_endpoint(const Vec3& original, double radius, std::uint64_t seed,
                                          RewardMode mode = RewardMode::uniform_reward);

}  // namespace fieldgen
