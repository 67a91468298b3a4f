#ifndef DLALLOC_ENV_ENVIRONMENT_HPP_
#define DLALLOC_ENV_ENVIRONMENT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dlalloc/env/config.hpp"
#include "dlalloc/env/world.hpp"
#include "dlalloc/rng.hpp"

namespace dlalloc::env {

// An episode whose random draws are fixed in advance: the initial world
// plus the exogenous draw for the end of every step up to the horizon.
// Policies replayed on it all face identical futures.
struct FrozenInstance {
  std::uint64_t seed = 0;
  WorldState initial;
  std::vector<ExogenousDraw> tape;  // tape[t-1] is applied after step t
};

FrozenInstance make_frozen_instance(const EpisodeConfig& cfg,
                                    std::uint64_t seed);

// Steps taken until every UE is served when replaying `actions` (indices) on
// `instance`; returns cfg.max_steps if the episode truncates. Stops at the
// first terminal step.
int replay_makespan(const FrozenInstance& instance, const EpisodeConfig& cfg,
                    std::span<const std::uint64_t> actions);

// Reset/step interface over one episode at a time. Owns its random source;
// one instance must be driven from one thread at a time.
class Environment {
 public:
  Environment(EpisodeConfig cfg, std::uint64_t seed);

  const WorldState& reset();
  // Replays a frozen instance instead of drawing a fresh episode.
  const WorldState& reset(const FrozenInstance& instance);

  StepOutcome step(std::span<const int> assignment);
  StepOutcome step(std::uint64_t action_index);

  const WorldState& state() const { return state_; }
  const EpisodeConfig& config() const { return cfg_; }
  std::vector<double> observation() const { return encode_state(state_, cfg_); }
  void observation_into(std::span<double> out) const {
    encode_state_into(state_, cfg_, out);
  }
  bool done() const { return state_.terminal; }
  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }

 private:
  EpisodeConfig cfg_;
  Rng rng_;
  WorldState state_;
  const FrozenInstance* frozen_ = nullptr;
  bool started_ = false;
};

}  // namespace dlalloc::env

#endif  // DLALLOC_ENV_ENVIRONMENT_HPP_
