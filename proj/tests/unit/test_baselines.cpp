#include <doctest.h>

#include <cmath>

#include "dlalloc/baselines/oracle.hpp"
#include "dlalloc/baselines/policies.hpp"
#include "dlalloc/env/channel.hpp"
#include "dlalloc/env/environment.hpp"
#include "dlalloc/errors.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace dlalloc;
using dlalloc::testing::make_state;

namespace {

baselines::Policy greedy_as_index() {
  return [](const env::WorldState& s) {
    return env::encode_action(baselines::greedy_gain_policy(s), s.num_stations());
  };
}

baselines::Policy myopic_as_index(const env::EpisodeConfig& cfg) {
  return [&cfg](const env::WorldState& s) {
    return env::encode_action(baselines::myopic_bruteforce_policy(s, cfg), s.num_stations());
  };
}

}  // namespace

TEST_CASE("random policy") {
  auto cfg = env::EpisodeConfig::calibrated(1, 1);
  Rng rng(1);
  const int draws = 100000;
  int ones = 0;
  for (int k = 0; k < draws; ++k) ones += baselines::random_policy(cfg, rng) == 1 ? 1 : 0;
  CHECK(std::abs(ones - draws / 2.0) < 3.0 * std::sqrt(draws * 0.25));

  auto big = env::EpisodeConfig::calibrated(4, 3);
  Rng a(2);
  Rng b(2);
  for (int k = 0; k < 100; ++k) {
    const auto x = baselines::random_policy(big, a);
    CHECK(x == baselines::random_policy(big, b));
    CHECK(x < big.num_actions());
  }
}

TEST_CASE("greedy gain policy") {
  const auto two = make_state(2, 2, {1e-9, 2e-9, 5e-9, 1e-9}, {1, 1}, {1e8, 1e8});
  CHECK(baselines::greedy_gain_policy(two) == env::Assignment{2, 1});
  const auto one_station = make_state(3, 1, {1e-9, 3e-9, 2e-9}, {1, 1, 1}, {1e8, 0.0, 1e8});
  CHECK(baselines::greedy_gain_policy(one_station) == env::Assignment{1, 0, 1});
  const auto done = make_state(2, 2, {1e-9, 2e-9, 5e-9, 1e-9}, {1, 1}, {0.0, 0.0});
  CHECK(baselines::greedy_gain_policy(done) == env::Assignment{0, 0});
  const auto tie = make_state(1, 3, {2e-9, 2e-9, 1e-9}, {1}, {1e8});
  CHECK(baselines::greedy_gain_policy(tie) == env::Assignment{1});
}

TEST_CASE("myopic brute force") {
  auto cfg = env::EpisodeConfig::calibrated(1, 2);
  SUBCASE("single UE picks its best-SINR station") {
    Rng rng(3);
    for (int k = 0; k < 20; ++k) {
      auto s = env::reset_episode(cfg, rng);
      s.remaining_bits[0] = 1e15;  // never finishes in one step
      const auto pick = baselines::myopic_bruteforce_policy(s, cfg);
      double best = -1.0;
      int best_v = 0;
      for (int v = 1; v <= 2; ++v) {
        const env::Assignment a{v};
        const double g = env::sinr(0, a, s, cfg);
        if (g > best) {
          best = g;
          best_v = v;
        }
      }
      CHECK(pick == env::Assignment{best_v});
    }
  }
  SUBCASE("all finished idles") {
    auto c2 = env::EpisodeConfig::calibrated(2, 2);
    const auto s = make_state(2, 2, {1e-9, 2e-9, 5e-9, 1e-9}, {1, 1}, {0.0, 0.0});
    CHECK(baselines::myopic_bruteforce_policy(s, c2) == env::Assignment{0, 0});
  }
  SUBCASE("cap") {
    auto c2 = env::EpisodeConfig::calibrated(4, 3);
    Rng rng(4);
    const auto s = env::reset_episode(c2, rng);
    CHECK_THROWS_AS(baselines::myopic_bruteforce_policy(s, c2, 255), CapExceeded);
    CHECK_NOTHROW(baselines::myopic_bruteforce_policy(s, c2, 256));
  }
}

TEST_CASE("oracle on a trivially short instance") {
  auto cfg = env::EpisodeConfig::frozen_toy();
  cfg.data_range_bits = {1e3, 2e3};
  const auto inst = env::make_frozen_instance(cfg, 5);
  const auto r = baselines::exhaustive_horizon_search(inst, cfg, 1);
  CHECK(r.completed);
  CHECK(r.best_makespan == 1);
  CHECK(baselines::policy_makespan(inst, cfg, myopic_as_index(cfg)) == 1);
}

TEST_CASE("oracle agrees with an independent dynamic program") {
  const auto cfg = env::EpisodeConfig::frozen_toy();
  int completed = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = env::make_frozen_instance(cfg, seed);
    const auto r = baselines::exhaustive_horizon_search(inst, cfg, 3);
    oracles::MakespanDp dp(inst, cfg, 3);
    const int reference = dp.solve();
    if (reference <= 3) {
      ++completed;
      CHECK(r.completed);
      CHECK(r.best_makespan == reference);
      CHECK(r.best_action_sequence.size() == static_cast<std::size_t>(r.best_makespan));
      CHECK(env::replay_makespan(inst, cfg, r.best_action_sequence) == r.best_makespan);
    } else {
      CHECK_FALSE(r.completed);
      CHECK(r.best_action_sequence.empty());
    }
  }
  CHECK(completed > 0);
}

TEST_CASE("oracle first-action values") {
  const auto cfg = env::EpisodeConfig::frozen_toy();
  const auto inst = env::make_frozen_instance(cfg, 17);
  const auto values = baselines::first_action_makespans(inst, cfg, env::kToyOracleHorizon);
  REQUIRE(values.size() == cfg.num_actions());
  const auto r = baselines::exhaustive_horizon_search(inst, cfg, env::kToyOracleHorizon);
  CHECK(*std::min_element(values.begin(), values.end()) == r.best_makespan);
  CHECK(values[r.best_action_sequence.front()] == r.best_makespan);
}

TEST_CASE("oracle dominance over baselines") {
  const auto cfg = env::EpisodeConfig::frozen_toy();
  double sum_myopic = 0.0;
  double sum_random = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = env::make_frozen_instance(cfg, 1000 + seed);
    const auto r = baselines::exhaustive_horizon_search(inst, cfg, env::kToyOracleHorizon);
    REQUIRE(r.completed);
    Rng rng(seed);
    const int greedy = baselines::policy_makespan(inst, cfg, greedy_as_index());
    const int myopic = baselines::policy_makespan(inst, cfg, myopic_as_index(cfg));
    const int random = baselines::policy_makespan(
        inst, cfg, [&](const env::WorldState&) { return baselines::random_policy(cfg, rng); });
    CHECK(r.best_makespan <= greedy);
    CHECK(r.best_makespan <= myopic);
    CHECK(r.best_makespan <= random);
    sum_myopic += myopic;
    sum_random += random;
  }
  CHECK(sum_myopic <= sum_random);
}

TEST_CASE("oracle refuses oversized searches") {
  const auto cfg = env::EpisodeConfig::frozen_toy();
  const auto inst = env::make_frozen_instance(cfg, 1);
  CHECK_THROWS_AS(baselines::exhaustive_horizon_search(inst, cfg, 6, 1000), CapExceeded);
  CHECK_THROWS_AS(baselines::exhaustive_horizon_search(inst, cfg, 0), InvalidParameter);
  CHECK_THROWS_AS(baselines::exhaustive_horizon_search(inst, cfg, cfg.max_steps + 1),
                  InvalidParameter);
}
