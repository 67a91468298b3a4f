#include "dlalloc/baselines/oracle.hpp"

#include <string>

#include "dlalloc/env/channel.hpp"
#include "dlalloc/errors.hpp"

namespace dlalloc::baselines {
namespace {

std::uint64_t saturating_power(std::uint64_t base, int exponent) {
  std::uint64_t result = 1;
  for (int k = 0; k < exponent; ++k) {
    if (result > UINT64_MAX / base) return UINT64_MAX;
    result *= base;
  }
  return result;
}

// Interference-free rate bound per (step, UE): the best station's gain at
// that step's position with that step's power and only thermal noise. No
// allocation can deliver faster, so it yields an admissible step bound.
std::vector<std::vector<double>> rate_bounds(const env::FrozenInstance& instance,
                                             const env::EpisodeConfig& cfg) {
  std::vector<std::vector<double>> bounds;
  env::WorldState s = instance.initial;
  for (int t = 1; t <= cfg.max_steps; ++t) {
    if (t > 1) {
      const auto& draw = instance.tape[static_cast<std::size_t>(t - 2)];
      s.ue_positions = draw.ue_positions;
      s.powers_w = draw.powers_w;
      env::recompute_gains(s, cfg);
    }
    std::vector<double> row(static_cast<std::size_t>(cfg.num_ues));
    for (int i = 0; i < cfg.num_ues; ++i) {
      double g = 0.0;
      for (int v = 0; v < cfg.num_stations; ++v) g = std::max(g, s.gain(i, v));
      row[static_cast<std::size_t>(i)] = env::data_rate(
          g * s.powers_w[static_cast<std::size_t>(i)] / cfg.noise_power_w(), cfg);
    }
    bounds.push_back(std::move(row));
  }
  return bounds;
}

struct Search {
  const env::FrozenInstance& instance;
  const env::EpisodeConfig& cfg;
  std::uint64_t num_actions;
  int horizon;
  int best;  // horizon + 1 until something completes
  std::vector<std::vector<double>> bounds;
  std::vector<std::uint64_t> path;
  std::vector<std::uint64_t> best_path;
  std::uint64_t nodes = 0;

  // Fewest steps any allocation could need from `state`.
  int steps_lower_bound(const env::WorldState& state) const {
    int worst = 0;
    for (int i = 0; i < cfg.num_ues; ++i) {
      double left = state.remaining_bits[static_cast<std::size_t>(i)];
      int k = 0;
      for (int t = state.step_index; left > 0.0; ++t, ++k) {
        if (t > cfg.max_steps) return cfg.max_steps + 1;
        left -= bounds[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(i)] *
                cfg.step_seconds;
      }
      worst = std::max(worst, k);
    }
    return worst;
  }

  void run(const env::WorldState& state, int depth) {
    if (depth + steps_lower_bound(state) >= best) return;
    for (std::uint64_t a = 0; a < num_actions; ++a) {
      env::WorldState next = state;
      const auto assignment = env::decode_action(a, cfg.num_ues, cfg.num_stations);
      env::apply_step(next, assignment, cfg,
                      instance.tape[static_cast<std::size_t>(state.step_index - 1)]);
      ++nodes;
      path.push_back(a);
      if (next.all_delivered()) {
        if (depth + 1 < best) {
          best = depth + 1;
          best_path = path;
        }
      } else if (!next.terminal && depth + 2 < best) {
        run(next, depth + 1);
      }
      path.pop_back();
      // Nothing shorter than one more step is possible below this node.
      if (best == depth + 1) return;
    }
  }
};

}  // namespace

OracleResult exhaustive_search_from(const env::FrozenInstance& instance,
                                    const env::EpisodeConfig& cfg,
                                    const env::WorldState& start, int horizon,
                                    std::uint64_t cap) {
  const int budget = cfg.max_steps - (start.step_index - 1);
  if (horizon < 1 || horizon > budget) {
    throw InvalidParameter("exhaustive search: horizon " + std::to_string(horizon) +
                           " outside [1, " + std::to_string(budget) + "]");
  }
  if (static_cast<int>(instance.tape.size()) < cfg.max_steps) {
    throw InvalidParameter("exhaustive search: frozen tape shorter than max_steps");
  }
  const std::uint64_t num_actions = cfg.num_actions();
  const std::uint64_t leaves = saturating_power(num_actions, horizon);
  if (leaves > cap) {
    throw CapExceeded("exhaustive search: " + std::to_string(num_actions) + "^" +
                      std::to_string(horizon) + " sequences exceed the cap " +
                      std::to_string(cap));
  }
  OracleResult result;
  if (start.terminal || start.all_delivered()) {
    result.completed = start.all_delivered();
    return result;
  }
  Search search{instance, cfg, num_actions, horizon, horizon + 1,
                rate_bounds(instance, cfg), {}, {}, 0};
  search.run(start, 0);
  result.nodes_expanded = search.nodes;
  if (search.best <= horizon) {
    result.completed = true;
    result.best_makespan = search.best;
    result.best_action_sequence = search.best_path;
  } else {
    result.best_makespan = budget;
  }
  return result;
}

OracleResult exhaustive_horizon_search(const env::FrozenInstance& instance,
                                       const env::EpisodeConfig& cfg, int horizon,
                                       std::uint64_t cap) {
  return exhaustive_search_from(instance, cfg, instance.initial, horizon, cap);
}

std::vector<int> first_action_makespans(const env::FrozenInstance& instance,
                                        const env::EpisodeConfig& cfg, int horizon,
                                        std::uint64_t cap) {
  const std::uint64_t num_actions = cfg.num_actions();
  if (saturating_power(num_actions, horizon) > cap) {
    throw CapExceeded("first_action_makespans: enumeration exceeds the cap");
  }
  std::vector<int> out(num_actions, cfg.max_steps);
  for (std::uint64_t a = 0; a < num_actions; ++a) {
    env::WorldState s = instance.initial;
    env::apply_step(s, env::decode_action(a, cfg.num_ues, cfg.num_stations), cfg,
                    instance.tape.front());
    if (s.all_delivered()) {
      out[a] = 1;
    } else if (!s.terminal && horizon > 1) {
      const auto rest = exhaustive_search_from(instance, cfg, s, horizon - 1, cap);
      if (rest.completed) out[a] = 1 + rest.best_makespan;
    }
  }
  return out;
}

}  // namespace dlalloc::baselines
