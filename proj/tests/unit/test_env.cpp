#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "dlalloc/env/action_codec.hpp"
#include "dlalloc/env/channel.hpp"
#include "dlalloc/env/environment.hpp"
#include "dlalloc/env/world.hpp"
#include "dlalloc/errors.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace dlalloc;
using dlalloc::testing::make_state;
using dlalloc::testing::rel_close;
using dlalloc::testing::same_place;

namespace {

// Config whose noise power w * sigma^2 is exactly 1e-6 W.
env::EpisodeConfig unit_noise(int n, int m) {
  env::EpisodeConfig cfg = env::EpisodeConfig::calibrated(n, m);
  cfg.bandwidth_hz = 1e7;
  cfg.noise_psd_w_per_hz = 1e-13;
  return cfg;
}

}  // namespace

TEST_CASE("path_loss hand values") {
  CHECK(env::path_loss(0.3 / (4.0 * std::numbers::pi), 0.3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rel_close(env::path_loss(1000.0, 3e-4), 5.6995e-16, 1e-4));
  CHECK(rel_close(env::path_loss(100.0, 0.1), 6.3326e-9, 1e-4));
  CHECK(env::path_loss(10.0, 1.0) > env::path_loss(11.0, 1.0));
  CHECK_THROWS_AS(env::path_loss(0.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(env::path_loss(1.0, -1.0), InvalidParameter);
}

TEST_CASE("channel gain floors the distance") {
  env::EpisodeConfig cfg = env::EpisodeConfig::calibrated(1, 1);
  CHECK(env::channel_gain(0.0, cfg) == env::path_loss(cfg.min_distance_m, cfg.wavelength_m));
  CHECK(env::channel_gain(0.25, cfg) == env::channel_gain(1.0, cfg));
}

TEST_CASE("sinr hand values") {
  const auto cfg = unit_noise(2, 1);
  SUBCASE("single link") {
    const auto one = unit_noise(1, 1);
    const auto s = make_state(1, 1, {1e-9}, {1.0}, {1e8});
    const env::Assignment a{1};
    CHECK(rel_close(env::sinr(0, a, s, one), 1e-3, 1e-10));
  }
  SUBCASE("zero own power") {
    const auto s = make_state(2, 1, {1e-6, 1e-6}, {0.0, 1.0}, {1e8, 1e8});
    const env::Assignment a{1, 1};
    CHECK(env::sinr(0, a, s, cfg) == 0.0);
  }
  SUBCASE("intra-cell interference") {
    const auto s = make_state(2, 1, {1e-6, 1e-6}, {1.0, 1.0}, {1e8, 1e8});
    const env::Assignment a{1, 1};
    CHECK(rel_close(env::sinr(0, a, s, cfg), 0.5, 1e-10));
    CHECK(rel_close(env::sinr(0, a, s, cfg), 1e-6 / oracles::sinr_denominator(0, a, s, cfg), 1e-10));
  }
  SUBCASE("idle UE radiates nothing and has no SINR") {
    const auto s = make_state(2, 1, {1e-6, 1e-6}, {1.0, 1.0}, {1e8, 1e8});
    const env::Assignment a{1, 0};
    CHECK(rel_close(env::sinr(0, a, s, cfg), 1.0, 1e-10));
    CHECK_THROWS_AS(env::sinr(1, a, s, cfg), InvalidParameter);
  }
}

TEST_CASE("sinr denominator matches brute-force re-summation") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const int m = 1 + static_cast<int>(rng.below(4));
    const auto cfg = env::EpisodeConfig::calibrated(n, m);
    env::WorldState s = env::reset_episode(cfg, rng);
    env::Assignment a(static_cast<std::size_t>(n));
    for (auto& digit : a) digit = static_cast<int>(rng.below(static_cast<std::uint64_t>(m + 1)));
    const auto rates = env::all_rates(a, s, cfg);
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0) {
        CHECK(rates[i] == 0.0);
        continue;
      }
      const double expected =
          s.gain(i, a[i] - 1) * s.powers_w[i] / oracles::sinr_denominator(i, a, s, cfg);
      const double got = env::sinr(i, a, s, cfg);
      CHECK(rel_close(got, expected, 1e-10));
      CHECK(rel_close(rates[i], env::data_rate(expected, cfg), 1e-10));
    }
  }
}

TEST_CASE("sinr is monotone in own and interfering power") {
  const auto cfg = unit_noise(3, 2);
  auto s = make_state(3, 2, {1e-6, 2e-7, 3e-7, 1e-6, 5e-7, 4e-7}, {1.0, 1.0, 1.0},
                      {1e8, 1e8, 1e8});
  const env::Assignment a{1, 1, 2};
  const double base = env::sinr(0, a, s, cfg);
  auto louder_self = s;
  louder_self.powers_w[0] = 2.0;
  CHECK(env::sinr(0, a, louder_self, cfg) > base);
  auto louder_intra = s;
  louder_intra.powers_w[1] = 2.0;
  CHECK(env::sinr(0, a, louder_intra, cfg) < base);
  auto louder_inter = s;
  louder_inter.powers_w[2] = 2.0;
  CHECK(env::sinr(0, a, louder_inter, cfg) < base);
}

TEST_CASE("data_rate") {
  CHECK(env::data_rate(0.0, 1e7) == 0.0);
  CHECK(rel_close(env::data_rate(1.0, 1e7), 1e7, 1e-12));
  CHECK(rel_close(env::data_rate(3.0, 1e7), 2e7, 1e-12));
  CHECK_THROWS_AS(env::data_rate(-0.1, 1e7), InvalidParameter);
  CHECK_THROWS_AS(env::data_rate(std::nan(""), 1e7), InvalidParameter);
}

TEST_CASE("apply_step drains data at the Shannon rate") {
  // g = 1e-6, p = 1, noise 1e-6 -> SINR 1 -> 1e7 bit/s for 5 s.
  auto cfg = unit_noise(1, 1);
  auto s = make_state(1, 1, {1e-6}, {1.0}, {1e8});
  const env::Assignment serve{1};
  const auto out = env::apply_step(s, serve, cfg, same_place(s));
  CHECK(rel_close(s.remaining_bits[0], 5e7, 1e-12));
  CHECK(rel_close(out.per_ue_rate_bps[0], 1e7, 1e-12));
  CHECK(out.reward == -1.0);
  CHECK_FALSE(out.done);
  CHECK(s.step_index == 2);
}

TEST_CASE("apply_step clips at zero and records the finish step") {
  auto cfg = unit_noise(1, 1);
  auto s = make_state(1, 1, {1e-6}, {1.0}, {1e6});
  s.step_index = 3;
  const env::Assignment serve{1};
  const auto out = env::apply_step(s, serve, cfg, same_place(s));
  CHECK(s.remaining_bits[0] == 0.0);
  CHECK(out.per_ue_finish_step[0] == 3);
  CHECK(out.done);
  CHECK_FALSE(out.truncated);
  CHECK(out.reward == -1.0);
  CHECK_THROWS_AS(env::apply_step(s, serve, cfg, same_place(s)), InvalidState);
}

TEST_CASE("apply_step reward composition") {
  auto cfg = unit_noise(3, 2);
  SUBCASE("time plus one waste") {
    auto s = make_state(3, 2, {1e-9, 1e-9, 1e-9, 1e-9, 1e-9, 1e-9}, {1.0, 1.0, 1.0},
                        {1e8, 1e8, 0.0});
    const env::Assignment a{1, 1, 2};
    const auto out = env::apply_step(s, a, cfg, same_place(s));
    CHECK(out.waste_count == 1);
    CHECK(out.reward == -4.0);
  }
  SUBCASE("fail penalty on the last allowed step") {
    cfg.max_steps = 1;
    auto s = make_state(3, 2, {1e-9, 1e-9, 1e-9, 1e-9, 1e-9, 1e-9}, {1.0, 1.0, 1.0},
                        {1e8, 1e8, 1e8});
    const env::Assignment idle{0, 0, 0};
    const auto out = env::apply_step(s, idle, cfg, same_place(s));
    CHECK(out.truncated);
    CHECK(out.done);
    CHECK(out.reward == -101.0);
  }
  SUBCASE("all finished and idle") {
    auto s = make_state(3, 2, {1e-9, 1e-9, 1e-9, 1e-9, 1e-9, 1e-9}, {1.0, 1.0, 1.0},
                        {0.0, 0.0, 0.0});
    const env::Assignment idle{0, 0, 0};
    const auto out = env::apply_step(s, idle, cfg, same_place(s));
    CHECK(out.done);
    CHECK(out.waste_count == 0);
    CHECK(out.reward == 0.0);
  }
  SUBCASE("malformed action") {
    auto s = make_state(3, 2, {1e-9, 1e-9, 1e-9, 1e-9, 1e-9, 1e-9}, {1.0, 1.0, 1.0},
                        {1e8, 1e8, 1e8});
    const env::Assignment bad{0, 3, 0};
    CHECK_THROWS_AS(env::apply_step(s, bad, cfg, same_place(s)), InvalidAction);
    const env::Assignment short_vec{0, 1};
    CHECK_THROWS_AS(env::apply_step(s, short_vec, cfg, same_place(s)), InvalidAction);
  }
}

TEST_CASE("episode invariants under a random policy") {
  const auto cfg = env::EpisodeConfig::calibrated(4, 3);
  env::Environment a(cfg, 99);
  env::Environment b(cfg, 99);
  Rng pick_a(5);
  Rng pick_b(5);
  for (int episode = 0; episode < 20; ++episode) {
    a.reset();
    b.reset();
    double total = 0.0;
    int steps = 0;
    int fail_hits = 0;
    while (!a.done()) {
      const auto before = a.state().remaining_bits;
      const auto oa = a.step(pick_a.below(cfg.num_actions()));
      const auto ob = b.step(pick_b.below(cfg.num_actions()));
      CHECK(oa.reward == ob.reward);
      CHECK(a.state() == b.state());
      for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(a.state().remaining_bits[i] <= before[i]);
        CHECK(a.state().remaining_bits[i] >= 0.0);
      }
      CHECK(oa.waste_count <= cfg.num_ues);
      total += oa.reward;
      fail_hits += oa.truncated ? 1 : 0;
      ++steps;
    }
    CHECK(steps <= cfg.max_steps);
    CHECK(fail_hits <= 1);
    CHECK(total <= -1.0);
  }
}

TEST_CASE("mobility") {
  auto cfg = env::EpisodeConfig::calibrated(4, 3);
  SUBCASE("zero move keeps positions") {
    cfg.max_move_m = 0.0;
    Rng rng(1);
    std::vector<env::Point> pts{{10, 20}, {999, 0}, {500, 500}};
    const auto before = pts;
    env::mobility_update(pts, cfg, rng);
    CHECK(pts == before);
  }
  SUBCASE("clamp at the border") {
    CHECK(env::displace({980, 500}, 100, 0, cfg).x == 1000.0);
    CHECK(env::displace({15, 500}, -100, 0, cfg).x == 0.0);
  }
  SUBCASE("uniform displacement law") {
    Rng rng(77);
    const int draws = 100000;
    double sum = 0.0;
    bool bounded = true;
    for (int k = 0; k < draws; ++k) {
      std::vector<env::Point> p{{500, 500}};
      env::mobility_update(p, cfg, rng);
      const double dx = p[0].x - 500.0;
      bounded = bounded && std::abs(dx) <= cfg.max_move_m;
      sum += dx;
    }
    CHECK(bounded);
    const double sigma = cfg.max_move_m / std::sqrt(3.0) / std::sqrt(static_cast<double>(draws));
    CHECK(std::abs(sum / draws) < 3.0 * sigma);
  }
}

TEST_CASE("reset_episode") {
  const auto cfg = env::EpisodeConfig::calibrated(4, 3);
  Rng r1(123);
  Rng r2(123);
  CHECK(env::reset_episode(cfg, r1) == env::reset_episode(cfg, r2));

  Rng rng(8);
  bool in_map = true;
  bool data_ok = true;
  for (int k = 0; k < 10000; ++k) {
    const auto s = env::reset_episode(cfg, rng);
    CHECK(s.step_index == 1);
    for (const auto& p : s.ue_positions) in_map = in_map && p.x >= 0 && p.x <= 1000 && p.y >= 0 && p.y <= 1000;
    for (const auto& p : s.station_positions) in_map = in_map && p.x >= 0 && p.x <= 1000 && p.y >= 0 && p.y <= 1000;
    for (double d : s.remaining_bits) data_ok = data_ok && d >= 1e8 && d <= 3e8;
    for (int i = 0; i < 4; ++i) {
      for (int v = 0; v < 3; ++v) {
        CHECK(s.gain(i, v) == env::channel_gain(env::distance(s.ue_positions[i], s.station_positions[v]), cfg));
      }
    }
  }
  CHECK(in_map);
  CHECK(data_ok);
}

TEST_CASE("encode_state layout") {
  const auto cfg = env::EpisodeConfig::calibrated(4, 3);
  Rng rng(3);
  auto s = env::reset_episode(cfg, rng);
  CHECK(env::encode_state(s, cfg).size() == 20);
  s.remaining_bits.assign(4, 0.0);
  const auto v = env::encode_state(s, cfg);
  for (int i = 0; i < 4; ++i) CHECK(v[i] == 0.0);

  const auto cfg2 = env::EpisodeConfig::calibrated(2, 2);
  Rng rng2(4);
  const auto s2 = env::reset_episode(cfg2, rng2);
  const auto e = env::encode_state(s2, cfg2);
  REQUIRE(e.size() == 8);
  CHECK(e[0] == doctest::Approx(s2.remaining_bits[0] / 3e8));
  CHECK(e[1] == doctest::Approx(s2.remaining_bits[1] / 3e8));
  // Gains row-major, larger gain -> larger code.
  CHECK((e[2] < e[3]) == (s2.gain(0, 0) < s2.gain(0, 1)));
  CHECK((e[4] < e[5]) == (s2.gain(1, 0) < s2.gain(1, 1)));
  for (int k = 2; k < 6; ++k) CHECK((e[k] >= 0.0 && e[k] <= 1.0));
  CHECK(e[6] == doctest::Approx((s2.powers_w[0] - 0.5) / 1.5));
  CHECK(e[7] == doctest::Approx((s2.powers_w[1] - 0.5) / 1.5));
}

TEST_CASE("action codec") {
  CHECK(env::encode_action(env::Assignment{0, 0}, 2) == 0);
  CHECK(env::encode_action(env::Assignment{1, 1}, 2) == 4);
  CHECK(env::decode_action(4, 2, 2) == env::Assignment{1, 1});
  std::set<env::Assignment> seen;
  for (std::uint64_t k = 0; k < 9; ++k) {
    const auto a = env::decode_action(k, 2, 2);
    CHECK(env::encode_action(a, 2) == k);
    seen.insert(a);
  }
  CHECK(seen.size() == 9);
  for (std::uint64_t k = 0; k < 256; ++k) {
    CHECK(env::encode_action(env::decode_action(k, 4, 3), 3) == k);
  }
  CHECK_THROWS_AS(env::decode_action(9, 2, 2), InvalidAction);
  CHECK_THROWS_AS(env::encode_action(env::Assignment{0, 3}, 2), InvalidAction);
}

TEST_CASE("config validation names the field") {
  auto cfg = env::EpisodeConfig::calibrated(4, 3);
  cfg.bandwidth_hz = 0.0;
  try {
    cfg.validate();
    FAIL("expected InvalidParameter");
  } catch (const InvalidParameter& e) {
    CHECK(std::string(e.what()).find("bandwidth_hz") != std::string::npos);
  }
  CHECK(env::EpisodeConfig::calibrated(4, 3).num_actions() == 256);
  CHECK(env::EpisodeConfig::calibrated(4, 3).state_size() == 20);
}

TEST_CASE("frozen instances replay identically") {
  const auto cfg = env::EpisodeConfig::frozen_toy();
  const auto inst = env::make_frozen_instance(cfg, 42);
  CHECK(inst.tape.size() == static_cast<std::size_t>(cfg.max_steps));
  env::Environment e(cfg, 0);
  e.reset(inst);
  CHECK(e.state() == inst.initial);
  std::vector<std::uint64_t> actions;
  while (!e.done()) {
    actions.push_back(4);
    e.step(std::uint64_t{4});
  }
  CHECK(env::replay_makespan(inst, cfg, actions) == static_cast<int>(actions.size()));
}
