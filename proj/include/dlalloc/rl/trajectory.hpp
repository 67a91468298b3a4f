#ifndef DLALLOC_RL_TRAJECTORY_HPP_
#define DLALLOC_RL_TRAJECTORY_HPP_

#include <cstdint>
#include <vector>

namespace dlalloc::rl {

// One worker's on-policy segment. It may cross episode boundaries;
// dones[t] marks the last step of an episode. When the final step is not
// terminal, bootstrap_value holds V of the state after it.
struct Trajectory {
  std::vector<std::vector<double>> states;
  std::vector<std::uint64_t> actions;
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<double> log_probs;
  std::vector<bool> dones;
  double bootstrap_value = 0.0;
  // Full behaviour-policy log-probabilities per step; filled only when a
  // KL penalty needs them.
  std::vector<std::vector<double>> behaviour_log_probs;

  std::size_t size() const { return actions.size(); }
  bool consistent() const {
    const auto n = actions.size();
    return states.size() == n && rewards.size() == n && values.size() == n &&
           log_probs.size() == n && dones.size() == n &&
           (behaviour_log_probs.empty() || behaviour_log_probs.size() == n);
  }
};

}  // namespace dlalloc::rl

#endif  // DLALLOC_RL_TRAJECTORY_HPP_
