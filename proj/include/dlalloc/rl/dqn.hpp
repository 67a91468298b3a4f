#ifndef DLALLOC_RL_DQN_HPP_
#define DLALLOC_RL_DQN_HPP_

#include <cstdint>
#include <optional>

#include "dlalloc/env/environment.hpp"
#include "dlalloc/nn/adam.hpp"
#include "dlalloc/rl/learner.hpp"
#include "dlalloc/rl/q_network.hpp"
#include "dlalloc/rl/replay_buffer.hpp"

namespace dlalloc::rl {

struct QLoss {
  double loss = 0.0;  // mean squared TD error
  nn::Gradients grads;
};

// Mean squared error between Q(s, a) and R + gamma * max Q_target(s', .).
QLoss dqn_loss(const TransitionBatch& batch, const QNetwork& online,
               const QNetwork& target, double gamma);

// One Adam step on a uniform minibatch. Returns nullopt (and changes
// nothing) while the buffer holds fewer than batch_size transitions.
std::optional<double> dqn_update(const ReplayBuffer& buffer, QNetwork& online,
                                 nn::Adam& optimizer, const QNetwork& target,
                                 const AgentConfig& cfg, Rng& rng);

// Fills the buffer with `steps` uniform-random-policy transitions,
// resetting the environment whenever an episode ends. Stored rewards are
// multiplied by `reward_scale`.
void warmup(ReplayBuffer& buffer, env::Environment& environment, int steps, Rng& rng,
            double reward_scale = 1.0);

// DQN, or dueling DQN when cfg.algorithm == kDdqn.
class DqnLearner : public Learner {
 public:
  DqnLearner(AgentConfig cfg, env::EpisodeConfig env_cfg, std::uint64_t seed);

  Algorithm algorithm() const override { return cfg_.algorithm; }
  void train(int episodes, const EpisodeSink& sink) override;
  void set_episode_budget(std::int64_t episodes) override { budget_ = episodes; }
  std::uint64_t act_greedy(const env::WorldState& state) override;
  nlohmann::json save() const override;
  void load(const nlohmann::json& doc) override;
  std::int64_t episodes_trained() const override { return episodes_; }

  // Linear decay over the first epsilon_decay_fraction of `budget` episodes.
  double epsilon(std::int64_t episode, std::int64_t budget) const;

  const QNetwork& online() const { return online_; }
  const QNetwork& target() const { return target_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  std::int64_t updates() const { return updates_; }

 private:
  AgentConfig cfg_;
  env::EpisodeConfig env_cfg_;
  Rng rng_;
  env::Environment env_;
  QNetwork online_;
  QNetwork target_;
  nn::Adam optimizer_;
  ReplayBuffer buffer_;
  std::vector<double> scratch_;
  std::int64_t updates_ = 0;
  std::int64_t env_steps_ = 0;
  std::int64_t episodes_ = 0;
  std::int64_t budget_ = 0;
  bool warmed_up_ = false;
};

}  // namespace dlalloc::rl

#endif  // DLALLOC_RL_DQN_HPP_
