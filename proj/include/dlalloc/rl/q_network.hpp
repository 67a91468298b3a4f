#ifndef DLALLOC_RL_Q_NETWORK_HPP_
#define DLALLOC_RL_Q_NETWORK_HPP_

#include <span>
#include <vector>

#include "dlalloc/nn/mlp.hpp"

namespace dlalloc::rl {

// Q-value approximator. The plain form is an Mlp with one output per
// action. The dueling form shares a trunk whose last affine layer emits
// 1 + A values read as V(s) and A(s, .), combined by mean-subtracted
// aggregation.
class QNetwork {
 public:
  QNetwork() = default;
  QNetwork(nn::Mlp net, bool dueling, int num_actions);

  static QNetwork create(int state_size, const std::vector<int>& hidden,
                         int num_actions, bool dueling, Rng& rng);

  nn::Matrix q_values(const nn::Matrix& states, nn::ForwardCache* cache = nullptr) const;
  std::vector<double> q_values(std::span<const double> state) const;

  // dLoss/dQ (A x B) to parameter gradients.
  nn::Gradients backward(const nn::ForwardCache& cache, const nn::Matrix& q_grad) const;

  bool dueling() const { return dueling_; }
  int num_actions() const { return num_actions_; }
  nn::Mlp& net() { return net_; }
  const nn::Mlp& net() const { return net_; }

 private:
  nn::Mlp net_;
  bool dueling_ = false;
  int num_actions_ = 0;
};

}  // namespace dlalloc::rl

#endif  // DLALLOC_RL_Q_NETWORK_HPP_
