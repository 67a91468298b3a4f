#include "dlalloc/rl/targets.hpp"

#include <algorithm>
#include <numeric>

#include "dlalloc/errors.hpp"

namespace dlalloc::rl {

double q_target(double reward, std::span<const double> next_q, double gamma, bool done) {
  if (done || gamma == 0.0) return reward;
  if (next_q.empty()) throw InvalidParameter("q_target: empty Q vector");
  return reward + gamma * *std::max_element(next_q.begin(), next_q.end());
}

std::vector<double> dueling_aggregate(double value, std::span<const double> advantages) {
  if (advantages.empty()) throw InvalidParameter("dueling_aggregate: no advantages");
  const double mean = std::accumulate(advantages.begin(), advantages.end(), 0.0) /
                      static_cast<double>(advantages.size());
  std::vector<double> q(advantages.size());
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = value + advantages[k] - mean;
  return q;
}

std::vector<double> gae(const Trajectory& trajectory, double gamma, double lambda) {
  const auto n = trajectory.size();
  if (trajectory.rewards.size() != n || trajectory.values.size() != n ||
      trajectory.dones.size() != n) {
    throw InvalidParameter("gae: trajectory lists differ in length");
  }
  std::vector<double> adv(n, 0.0);
  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double next_value =
        t + 1 < n ? trajectory.values[t + 1] : trajectory.bootstrap_value;
    const double live = trajectory.dones[t] ? 0.0 : 1.0;
    const double delta =
        trajectory.rewards[t] + gamma * next_value * live - trajectory.values[t];
    running = delta + gamma * lambda * live * running;
    adv[t] = running;
  }
  return adv;
}

std::uint64_t argmax(std::span<const double> values) {
  if (values.empty()) throw InvalidParameter("argmax: empty vector");
  return static_cast<std::uint64_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

std::uint64_t epsilon_greedy(std::span<const double> q_values, double epsilon, Rng& rng) {
  if (epsilon < 0 || epsilon > 1) throw InvalidParameter("epsilon_greedy: epsilon outside [0, 1]");
  if (rng.uniform() < epsilon) return rng.below(q_values.size());
  return argmax(q_values);
}

std::uint64_t sample_categorical(std::span<const double> probs, Rng& rng) {
  if (probs.empty()) throw InvalidParameter("sample_categorical: empty distribution");
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    cumulative += probs[k];
    if (u < cumulative) return k;
  }
  // Rounding left u above the total; return the last action with mass.
  for (std::size_t k = probs.size(); k-- > 0;) {
    if (probs[k] > 0.0) return k;
  }
  return probs.size() - 1;
}

ClippedSurrogate clipped_surrogate(double ratio, double advantage, double clip_eps) {
  const double clipped_ratio = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  const double unclipped = ratio * advantage;
  const double clipped = clipped_ratio * advantage;
  if (clipped < unclipped) return {clipped, true};
  return {unclipped, false};
}

}  // namespace dlalloc::rl
