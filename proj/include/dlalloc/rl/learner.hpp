#ifndef DLALLOC_RL_LEARNER_HPP_
#define DLALLOC_RL_LEARNER_HPP_

#include <cstdint>
#include <functional>

#include <json.hpp>

#include "dlalloc/env/world.hpp"
#include "dlalloc/rl/agent_config.hpp"

namespace dlalloc::rl {

struct EpisodeSummary {
  double total_reward = 0.0;
  int steps_taken = 0;  // max_i T_i when completed, else max_steps
  int waste_count = 0;
  bool completed = false;
};

// Accumulates step outcomes into an EpisodeSummary.
class EpisodeTally {
 public:
  void add(const env::StepOutcome& outcome) {
    summary_.total_reward += outcome.reward;
    summary_.waste_count += outcome.waste_count;
    summary_.steps_taken += 1;
    if (outcome.done) summary_.completed = !outcome.truncated;
  }
  const EpisodeSummary& summary() const { return summary_; }
  void clear() { summary_ = {}; }

 private:
  EpisodeSummary summary_;
};

using EpisodeSink = std::function<void(const EpisodeSummary&)>;

// Common surface of every policy the harness can train and evaluate.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual Algorithm algorithm() const = 0;

  // Trains for exactly `episodes` finished episodes, reporting each to
  // `sink` in a deterministic order.
  virtual void train(int episodes, const EpisodeSink& sink) = 0;

  // Total episodes the run will train for, so that schedules span the whole
  // run when train() is called in chunks. Without it a schedule spans the
  // first train() call.
  virtual void set_episode_budget(std::int64_t /*episodes*/) {}

  // Action without exploration noise.
  virtual std::uint64_t act_greedy(const env::WorldState& state) = 0;

  // Checkpoint: networks, optimizer moments, counters and RNG state.
  virtual nlohmann::json save() const = 0;
  virtual void load(const nlohmann::json& doc) = 0;

  virtual std::int64_t episodes_trained() const = 0;
};

}  // namespace dlalloc::rl

#endif  // DLALLOC_RL_LEARNER_HPP_
