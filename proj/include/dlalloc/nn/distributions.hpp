#ifndef DLALLOC_NN_DISTRIBUTIONS_HPP_
#define DLALLOC_NN_DISTRIBUTIONS_HPP_

#include <span>
#include <vector>

namespace dlalloc::nn {

struct Categorical {
  std::vector<double> probs;
  std::vector<double> log_probs;
  double entropy = 0.0;  // -sum p ln p, nats
};

// Max-subtracted softmax with log-probabilities and entropy.
Categorical softmax_and_entropy(std::span<const double> logits);

// KL(p || q) in nats for two categorical distributions given as
// log-probabilities.
double kl_divergence(std::span<const double> log_p, std::span<const double> log_q);

}  // namespace dlalloc::nn

#endif  // DLALLOC_NN_DISTRIBUTIONS_HPP_
