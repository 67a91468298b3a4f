#include "dlalloc/env/environment.hpp"

#include <utility>

#include "dlalloc/env/action_codec.hpp"
#include "dlalloc/errors.hpp"

namespace dlalloc::env {

FrozenInstance make_frozen_instance(const EpisodeConfig& cfg,
                                    std::uint64_t seed) {
  Rng rng(seed);
  FrozenInstance inst;
  inst.seed = seed;
  inst.initial = reset_episode(cfg, rng);
  WorldState cursor = inst.initial;
  inst.tape.reserve(static_cast<std::size_t>(cfg.max_steps));
  for (int t = 0; t < cfg.max_steps; ++t) {
    inst.tape.push_back(draw_exogenous(cursor, cfg, rng));
    cursor.ue_positions = inst.tape.back().ue_positions;
  }
  return inst;
}

int replay_makespan(const FrozenInstance& instance, const EpisodeConfig& cfg,
                    std::span<const std::uint64_t> actions) {
  WorldState s = instance.initial;
  int steps = 0;
  for (std::uint64_t a : actions) {
    if (s.terminal) break;
    const auto assignment = decode_action(a, cfg.num_ues, cfg.num_stations);
    apply_step(s, assignment, cfg, instance.tape[static_cast<std::size_t>(s.step_index - 1)]);
    ++steps;
  }
  return s.all_delivered() ? steps : cfg.max_steps;
}

Environment::Environment(EpisodeConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), rng_(seed) {
  cfg_.validate();
}

const WorldState& Environment::reset() {
  frozen_ = nullptr;
  state_ = reset_episode(cfg_, rng_);
  started_ = true;
  return state_;
}

const WorldState& Environment::reset(const FrozenInstance& instance) {
  if (instance.initial.num_ues() != cfg_.num_ues ||
      instance.initial.num_stations() != cfg_.num_stations ||
      static_cast<int>(instance.tape.size()) < cfg_.max_steps) {
    throw InvalidParameter("Environment::reset: frozen instance does not match config");
  }
  frozen_ = &instance;
  state_ = instance.initial;
  started_ = true;
  return state_;
}

StepOutcome Environment::step(std::span<const int> assignment) {
  if (!started_) throw InvalidState("Environment::step before reset");
  if (frozen_ != nullptr) {
    return apply_step(state_, assignment, cfg_,
                      frozen_->tape[static_cast<std::size_t>(state_.step_index - 1)]);
  }
  return apply_step(state_, assignment, cfg_, rng_);
}

StepOutcome Environment::step(std::uint64_t action_index) {
  if (action_index >= cfg_.num_actions()) {
    throw InvalidAction("action index out of range");
  }
  const auto assignment = decode_action(action_index, cfg_.num_ues, cfg_.num_stations);
  return step(assignment);
}

}  // namespace dlalloc::env
