#ifndef DLALLOC_RL_ACTOR_CRITIC_HPP_
#define DLALLOC_RL_ACTOR_CRITIC_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dlalloc/env/environment.hpp"
#include "dlalloc/nn/adam.hpp"
#include "dlalloc/rl/learner.hpp"
#include "dlalloc/rl/policy_head.hpp"
#include "dlalloc/rl/trajectory.hpp"

namespace dlalloc::rl {

// Separate policy and state-value networks, each with its own Adam state.
// The actor emits head.num_logits() logits.
struct ActorCritic {
  PolicyHead head;
  nn::Mlp actor;
  nn::Mlp critic;
  nn::Adam actor_optimizer;
  nn::Adam critic_optimizer;

  static ActorCritic create(int state_size, const std::vector<int>& hidden, PolicyHead head,
                            double lr, Rng& rng);
  // Joint softmax over `num_actions`.
  static ActorCritic create(int state_size, const std::vector<int>& hidden,
                            int num_actions, double lr, Rng& rng);
};

struct PolicyGradients {
  nn::Gradients actor;
  nn::Gradients critic;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

struct PolicyLosses {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;       // PPO only
  double clip_fraction = 0.0;   // PPO only
};

// Losses and gradients of one worker's segment, averaged over its steps:
//   policy = -mean(adv * log pi(a|s)) - c_ent * mean(H(pi(.|s)))
//   value  = mean((V(s) - (adv + V_old(s)))^2)
// with adv from GAE over the stored value estimates (held constant).
PolicyGradients a2c_gradients(const Trajectory& segment, const ActorCritic& model,
                              const AgentConfig& cfg);

// Same, with the policy term weighted by `policy_advantages` instead of the
// raw GAE values. The critic still regresses the raw GAE returns.
PolicyGradients a2c_gradients(const Trajectory& segment,
                              std::span<const double> policy_advantages,
                              const ActorCritic& model, const AgentConfig& cfg);

// Rescales to zero mean and unit variance; no-op for fewer than 2 values.
void normalize_advantages(std::span<double> advantages);

// Per-worker gradients averaged with equal weight per worker. With
// cfg.normalize_advantages the policy advantages are standardized over the
// union of all segments first. Workers run on their own threads when
// `parallel` is set.
PolicyGradients a2c_average_gradients(std::span<const Trajectory> segments,
                                      const ActorCritic& model, const AgentConfig& cfg,
                                      bool parallel);

// One synchronized step: average, clip, then a single Adam step per net.
PolicyLosses a2c_update(std::span<const Trajectory> segments, ActorCritic& model,
                        const AgentConfig& cfg);

// Clipped-surrogate PPO: ppo_epochs passes of shuffled minibatches of
// batch_size over all segments. The policy objective is
//   mean(min(rho * adv, clip(rho, 1-eps, 1+eps) * adv))
//   - kl_coef * mean(KL(pi_old || pi)) + c_ent * mean(H)
// and the critic regresses the GAE returns.
PolicyLosses ppo_update(std::span<const Trajectory> segments, ActorCritic& model,
                        const AgentConfig& cfg, Rng& rng);

// Environment plus random stream owned by one sampling worker.
struct RolloutWorker {
  env::Environment environment;
  Rng rng;
  std::vector<double> observation;
  EpisodeTally tally;
  bool needs_reset = true;
};

// Samples `length` steps from the current policy, resetting on episode end.
// Finished episodes (raw rewards) are appended to `finished` in order; the
// segment stores rewards multiplied by `reward_scale`.
Trajectory collect_segment(RolloutWorker& worker, const ActorCritic& model, int length,
                           bool keep_behaviour_log_probs,
                           std::vector<EpisodeSummary>& finished,
                           double reward_scale = 1.0);

// A2C (synchronous multi-worker advantage actor-critic) or PPO, selected by
// cfg.algorithm.
class ActorCriticLearner : public Learner {
 public:
  ActorCriticLearner(AgentConfig cfg, env::EpisodeConfig env_cfg, std::uint64_t seed);

  Algorithm algorithm() const override { return cfg_.algorithm; }
  void train(int episodes, const EpisodeSink& sink) override;
  std::uint64_t act_greedy(const env::WorldState& state) override;
  nlohmann::json save() const override;
  void load(const nlohmann::json& doc) override;
  std::int64_t episodes_trained() const override { return episodes_; }

  const ActorCritic& model() const { return model_; }
  const PolicyLosses& last_losses() const { return last_losses_; }

 private:
  AgentConfig cfg_;
  env::EpisodeConfig env_cfg_;
  Rng rng_;
  ActorCritic model_;
  std::vector<RolloutWorker> workers_;
  std::vector<double> scratch_;
  PolicyLosses last_losses_;
  // Episodes that finished after the previous train() call reached its
  // count; reported first by the next call.
  std::vector<EpisodeSummary> pending_;
  std::int64_t episodes_ = 0;
  std::int64_t updates_ = 0;
};

}  // namespace dlalloc::rl

#endif  // DLALLOC_RL_ACTOR_CRITIC_HPP_
