#include "dlalloc/rl/q_network.hpp"

#include <utility>

#include "dlalloc/errors.hpp"

namespace dlalloc::rl {

QNetwork::QNetwork(nn::Mlp net, bool dueling, int num_actions)
    : net_(std::move(net)), dueling_(dueling), num_actions_(num_actions) {
  if (net_.output_size() != num_actions + (dueling ? 1 : 0)) {
    throw InvalidParameter("QNetwork: output width does not match the action count");
  }
}

QNetwork QNetwork::create(int state_size, const std::vector<int>& hidden,
                          int num_actions, bool dueling, Rng& rng) {
  std::vector<int> sizes{state_size};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(num_actions + (dueling ? 1 : 0));
  return QNetwork(nn::Mlp(sizes, rng), dueling, num_actions);
}

nn::Matrix QNetwork::q_values(const nn::Matrix& states, nn::ForwardCache* cache) const {
  nn::Matrix raw = net_.forward(states, cache);
  if (!dueling_) return raw;
  const auto a = static_cast<Eigen::Index>(num_actions_);
  nn::Matrix adv = raw.bottomRows(a);
  const Eigen::RowVectorXd shift = raw.row(0) - adv.colwise().mean();
  adv.rowwise() += shift;
  return adv;
}

std::vector<double> QNetwork::q_values(std::span<const double> state) const {
  const Eigen::Map<const nn::Matrix> x(state.data(), static_cast<Eigen::Index>(state.size()), 1);
  const nn::Matrix q = q_values(nn::Matrix(x));
  return {q.data(), q.data() + q.size()};
}

nn::Gradients QNetwork::backward(const nn::ForwardCache& cache,
                                 const nn::Matrix& q_grad) const {
  if (!dueling_) return net_.backward(cache, q_grad);
  const auto a = static_cast<Eigen::Index>(num_actions_);
  nn::Matrix raw_grad(a + 1, q_grad.cols());
  raw_grad.row(0) = q_grad.colwise().sum();
  raw_grad.bottomRows(a) = q_grad.rowwise() - q_grad.colwise().mean();
  return net_.backward(cache, raw_grad);
}

}  // namespace dlalloc::rl
