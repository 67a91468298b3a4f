#ifndef DLALLOC_RL_TARGETS_HPP_
#define DLALLOC_RL_TARGETS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dlalloc/rl/trajectory.hpp"
#include "dlalloc/rng.hpp"

namespace dlalloc::rl {

// R + gamma * max_a Q(s', a); the bootstrap is dropped on terminal steps.
double q_target(double reward, std::span<const double> next_q, double gamma, bool done);

// Q(s, a) = V(s) + A(s, a) - mean_a A(s, a).
std::vector<double> dueling_aggregate(double value, std::span<const double> advantages);

// Generalized advantage estimate by the backward recursion
//   delta_t = r_t + gamma * V_{t+1} * (1 - done_t) - V_t
//   adv_t   = delta_t + gamma * lambda * (1 - done_t) * adv_{t+1}
std::vector<double> gae(const Trajectory& trajectory, double gamma, double lambda);

// First index of the maximum.
std::uint64_t argmax(std::span<const double> values);

// With probability epsilon a uniform action, otherwise argmax. Always
// consumes one coin draw, plus one action draw when exploring.
std::uint64_t epsilon_greedy(std::span<const double> q_values, double epsilon, Rng& rng);

// Inverse-CDF draw from a probability vector.
std::uint64_t sample_categorical(std::span<const double> probs, Rng& rng);

// PPO per-sample surrogate min(rho * adv, clip(rho, 1-eps, 1+eps) * adv).
struct ClippedSurrogate {
  double value = 0.0;
  bool clipped = false;  // true when the clipped branch is selected and binds
};
ClippedSurrogate clipped_surrogate(double ratio, double advantage, double clip_eps);

}  // namespace dlalloc::rl

#endif  // DLALLOC_RL_TARGETS_HPP_
