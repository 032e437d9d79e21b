#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fieldgen/reward.hpp"

using namespace fieldgen;

namespace {
// Two-sided KS statistic against a CDF.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}
}  // namespace

TEST_CASE("reward endpoints are exact") {
  const Vec3 g(0.5, 0.0, 0.1);
  CHECK(reward_of(g, g, 0.05) == 1.0);
  CHECK(reward_of(g, g + Vec3(0.05, 0, 0), 0.05) == 0.0);
  CHECK(reward_of(g, g + Vec3(0, 0.025, 0), 0.05) == doctest::Approx(0.5));
  CHECK_THROWS_AS(reward_of(g, g + Vec3(0, 0, 0.06), 0.05), std::domain_error);
}

TEST_CASE("mode names") {
  CHECK(parse_reward_mode("off") == RewardMode::off);
  CHECK(parse_reward_mode(to_string(RewardMode::uniform_volume)) == RewardMode::uniform_volume);
  CHECK_THROWS_AS(parse_reward_mode("gaussian"), std::invalid_argument);
}

TEST_CASE("uniform_reward mode gives uniform rewards and isotropic directions") {
  const Vec3 g(0.1, 0.2, 0.3);
  Rng rng(99);
  std::vector<double> rewards;
  Vec3 dir_sum = Vec3::Zero();
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto e = sample_rewarded_endpoint(g, 0.05, rng);
    CHECK_FALSE((e.sampled - g).norm() > 0.05 + 1e-15);
    CHECK(std::abs(e.reward - reward_of(g, e.sampled, 0.05)) < 1e-12);
    rewards.push_back(e.reward);
    if (e.distance > 0) dir_sum += (e.sampled - g) / e.distance;
  }
  const double ks = ks_statistic(rewards, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(ks < 0.01);
  // Mean of n unit vectors has per-axis sd 1/sqrt(3n).
  CHECK((dir_sum / n).cwiseAbs().maxCoeff() < 4.0 / std::sqrt(3.0 * n));
}

TEST_CASE("uniform_volume mode gives reward CDF 1 - (1 - x)^3") {
  Rng rng(7);
  std::vector<double> rewards;
  for (int i = 0; i < 100000; ++i)
    rewards.push_back(sample_rewarded_endpoint(Vec3::Zero(), 0.05, rng, RewardMode::uniform_volume).reward);
  const double ks = ks_statistic(rewards, [](double x) { return 1.0 - std::pow(1.0 - std::clamp(x, 0.0, 1.0), 3); });
  CHECK(ks < 0.01);
}

TEST_CASE("seeded sampling is deterministic; off mode keeps the goal") {
  const auto a = sample_rewarded_endpoint(Vec3::Zero(), 0.05, std::uint64_t{5});
  const auto b = sample_rewarded_endpoint(Vec3::Zero(), 0.05, std::uint64_t{5});
  CHECK(a.sampled == b.sampled);
  CHECK(a.reward == b.reward);
  Rng rng(1);
  const auto off = sample_rewarded_endpoint(Vec3(1, 2, 3), 0.05, rng, RewardMode::off);
  CHECK(off.sampled == Vec3(1, 2, 3));
  CHECK(off.reward == 1.0);
  CHECK_THROWS(sample_rewarded_endpoint(Vec3::Zero(), 0.0, rng));
}

TEST_CASE("rng variates") {
  Rng rng(123);
  double sum = 0, sq = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sq / n - 1.0) < 0.03);
  CHECK(std::abs(rng.unit_vector().norm() - 1.0) < 1e-12);
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  CHECK(derive_seed(0, 0) == derive_seed(0, 0));
}
