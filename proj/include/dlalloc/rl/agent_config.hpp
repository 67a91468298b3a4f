#ifndef DLALLOC_RL_AGENT_CONFIG_HPP_
#define DLALLOC_RL_AGENT_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace dlalloc::rl {

enum class Algorithm { kDqn, kDdqn, kA2c, kPpo, kRandom, kGreedy, kMyopic };

std::string_view to_string(Algorithm algorithm);
// Accepts the CLI spellings: dqn, ddqn, a2c, ppo, random, greedy, myopic.
Algorithm algorithm_from_string(std::string_view name);
bool is_learning(Algorithm algorithm);

struct AgentConfig {
  Algorithm algorithm = Algorithm::kDqn;
  double lr = 1e-3;
  std::vector<int> hidden{128};
  int batch_size = 64;
  double entropy_coefficient = 0.0;
  double gae_lambda = 0.95;
  double gamma = 0.99;

  // Value-based agents.
  int target_sync_period = 500;  // in gradient updates
  int replay_capacity = 100000;
  int warmup_steps = 1000;
  int train_every = 1;  // environment steps between update rounds
  int updates_per_round = 1;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.2;  // of the episode budget

  // Policy-gradient agents.
  int num_workers = 4;
  int rollout_length = 16;  // steps per worker per update
  double ppo_clip = 0.2;
  double ppo_kl_coef = 0.0;
  int ppo_epochs = 4;
  bool normalize_advantages = false;
  // One softmax per UE instead of one over all joint actions.
  bool factored_policy = false;
  bool parallel_workers = true;

  double grad_clip_norm = 10.0;  // 0 disables clipping
  // Multiplies rewards before they enter losses; reported metrics stay raw.
  double reward_scale = 1.0;
  std::uint64_t init_seed_salt = 0;
  std::uint64_t myopic_cap = std::uint64_t{1} << 20;

  // Throws InvalidParameter naming the offending field.
  void validate() const;

  // Hyperparameters from the published table for the scenario presets
  // (4,3), (6,3), (7,4); (7,3) maps to the value-based row printed with 7
  // UEs. Throws InvalidParameter for scenarios without a row.
  static AgentConfig table_ii(Algorithm algorithm, int num_ues, int num_stations);
};

nlohmann::json to_json(const AgentConfig& cfg);
// Overlays the keys of `doc` on `base`; unknown keys are errors.
AgentConfig agent_config_from_json(const nlohmann::json& doc, AgentConfig base);

}  // namespace dlalloc::rl

#endif  // DLALLOC_RL_AGENT_CONFIG_HPP_
