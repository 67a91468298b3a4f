#include "dlalloc/nn/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "dlalloc/errors.hpp"

namespace dlalloc::nn {

Categorical softmax_and_entropy(std::span<const double> logits) {
  if (logits.empty()) throw InvalidParameter("softmax: empty logits");
  const double top = *std::max_element(logits.begin(), logits.end());
  Categorical out;
  out.probs.resize(logits.size());
  out.log_probs.resize(logits.size());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out.probs[k] = std::exp(logits[k] - top);
    total += out.probs[k];
  }
  const double log_total = std::log(total);
  double entropy = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out.probs[k] /= total;
    out.log_probs[k] = logits[k] - top - log_total;
    if (out.probs[k] > 0.0) entropy -= out.probs[k] * out.log_probs[k];
  }
  out.entropy = std::max(0.0, entropy);
  return out;
}

double kl_divergence(std::span<const double> log_p, std::span<const double> log_q) {
  if (log_p.size() != log_q.size()) throw InvalidParameter("kl_divergence: size mismatch");
  double kl = 0.0;
  for (std::size_t k = 0; k < log_p.size(); ++k) {
    const double p = std::exp(log_p[k]);
    if (p > 0.0) kl += p * (log_p[k] - log_q[k]);
  }
  return std::max(0.0, kl);
}

}  // namespace dlalloc::nn
