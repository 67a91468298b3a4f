#include "dlalloc/baselines/policies.hpp"

#include <limits>

#include "dlalloc/env/channel.hpp"
#include "dlalloc/errors.hpp"

namespace dlalloc::baselines {

std::uint64_t random_policy(const env::EpisodeConfig& cfg, Rng& rng) {
  return rng.below(cfg.num_actions());
}

env::Assignment greedy_gain_policy(const env::WorldState& state) {
  const int n = state.num_ues();
  const int m = state.num_stations();
  env::Assignment out(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    if (state.remaining_bits[static_cast<std::size_t>(i)] <= 0.0) continue;
    int best = 0;
    for (int v = 1; v < m; ++v) {
      if (state.gain(i, v) > state.gain(i, best)) best = v;
    }
    out[static_cast<std::size_t>(i)] = best + 1;
  }
  return out;
}

double projected_completion(const env::WorldState& state, std::span<const int> assignment,
                            const env::EpisodeConfig& cfg) {
  const auto rates = env::all_rates(assignment, state, cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const double d = state.remaining_bits[i];
    if (d <= 0.0) continue;
    const double per_step = rates[i] * cfg.step_seconds;
    const double left = std::max(0.0, d - per_step);
    if (left == 0.0) continue;
    if (per_step <= 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, left / per_step);
  }
  return worst;
}

env::Assignment myopic_bruteforce_policy(const env::WorldState& state,
                                         const env::EpisodeConfig& cfg,
                                         std::uint64_t cap) {
  const std::uint64_t count = cfg.num_actions();
  if (count > cap) {
    throw CapExceeded("myopic policy: " + std::to_string(count) +
                      " joint actions exceed the enumeration cap " + std::to_string(cap));
  }
  std::uint64_t best_index = 0;
  double best_score = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::uint64_t a = 0; a < count; ++a) {
    const auto assignment = env::decode_action(a, cfg.num_ues, cfg.num_stations);
    const double score = projected_completion(state, assignment, cfg);
    if (!found || score < best_score) {
      best_score = score;
      best_index = a;
      found = true;
    }
  }
  return env::decode_action(best_index, cfg.num_ues, cfg.num_stations);
}

int policy_makespan(const env::FrozenInstance& instance, const env::EpisodeConfig& cfg,
                    const Policy& policy) {
  env::Environment environment(cfg, instance.seed);
  environment.reset(instance);
  int steps = 0;
  while (!environment.done()) {
    environment.step(policy(environment.state()));
    ++steps;
  }
  return environment.state().all_delivered() ? steps : cfg.max_steps;
}

}  // namespace dlalloc::baselines
