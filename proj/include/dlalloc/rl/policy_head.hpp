#ifndef DLALLOC_RL_POLICY_HEAD_HPP_
#define DLALLOC_RL_POLICY_HEAD_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dlalloc/rng.hpp"

namespace dlalloc::rl {

// Maps actor logits to a distribution over joint action indices.
//
// Joint: one softmax over all (M+1)^N logits.
// Factored: N softmaxes over M+1 logits, one per UE (UE 0 first), sampled
// independently; the joint log-probability is the sum of the per-UE terms
// and the joint action is their base-(M+1) encoding.
class PolicyHead {
 public:
  PolicyHead() = default;
  PolicyHead(int num_ues, int num_stations, bool factored);
  // One softmax over `num_actions` logits.
  static PolicyHead joint(int num_actions);

  struct Dist {
    // Concatenated per-head probabilities and log-probabilities.
    std::vector<double> probs;
    std::vector<double> log_probs;
    std::vector<double> head_entropy;
    double entropy = 0.0;  // sum over heads
  };

  int num_logits() const { return heads_ * width_; }
  bool factored() const { return heads_ > 1; }

  Dist evaluate(std::span<const double> logits) const;
  double log_prob(const Dist& dist, std::uint64_t action) const;
  std::uint64_t sample(const Dist& dist, Rng& rng) const;
  // Most likely joint action (lowest index on ties).
  std::uint64_t mode(std::span<const double> logits) const;

  // grad += coef * d log pi(action) / d logits
  void add_log_prob_grad(const Dist& dist, std::uint64_t action, double coef,
                         Eigen::Ref<Eigen::VectorXd> grad) const;
  // grad += coef * d H / d logits
  void add_entropy_grad(const Dist& dist, double coef, Eigen::Ref<Eigen::VectorXd> grad) const;

 private:
  // Choice of head h inside a joint action.
  int digit(std::uint64_t action, int head) const;

  int heads_ = 1;
  int width_ = 1;
};

}  // namespace dlalloc::rl

#endif  // DLALLOC_RL_POLICY_HEAD_HPP_
