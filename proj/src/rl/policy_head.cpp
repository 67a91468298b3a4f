#include "dlalloc/rl/policy_head.hpp"

#include "dlalloc/errors.hpp"
#include "dlalloc/nn/distributions.hpp"
#include "dlalloc/rl/targets.hpp"

namespace dlalloc::rl {

PolicyHead::PolicyHead(int num_ues, int num_stations, bool factored) {
  if (num_ues < 1 || num_stations < 1) throw InvalidParameter("PolicyHead: empty scenario");
  if (factored) {
    heads_ = num_ues;
    width_ = num_stations + 1;
  } else {
    std::uint64_t n = 1;
    for (int i = 0; i < num_ues; ++i) n *= static_cast<std::uint64_t>(num_stations + 1);
    heads_ = 1;
    width_ = static_cast<int>(n);
  }
}

PolicyHead PolicyHead::joint(int num_actions) {
  if (num_actions < 1) throw InvalidParameter("PolicyHead: empty action set");
  PolicyHead head;
  head.width_ = num_actions;
  return head;
}

int PolicyHead::digit(std::uint64_t action, int head) const {
  if (heads_ == 1) return static_cast<int>(action);
  for (int h = 0; h < head; ++h) action /= static_cast<std::uint64_t>(width_);
  return static_cast<int>(action % static_cast<std::uint64_t>(width_));
}

PolicyHead::Dist PolicyHead::evaluate(std::span<const double> logits) const {
  if (logits.size() != static_cast<std::size_t>(num_logits())) {
    throw InvalidParameter("PolicyHead: expected " + std::to_string(num_logits()) +
                           " logits, got " + std::to_string(logits.size()));
  }
  Dist d;
  d.probs.reserve(logits.size());
  d.log_probs.reserve(logits.size());
  for (int h = 0; h < heads_; ++h) {
    const auto c = nn::softmax_and_entropy(
        logits.subspan(static_cast<std::size_t>(h * width_), static_cast<std::size_t>(width_)));
    d.probs.insert(d.probs.end(), c.probs.begin(), c.probs.end());
    d.log_probs.insert(d.log_probs.end(), c.log_probs.begin(), c.log_probs.end());
    d.head_entropy.push_back(c.entropy);
    d.entropy += c.entropy;
  }
  return d;
}

double PolicyHead::log_prob(const Dist& d, std::uint64_t action) const {
  double lp = 0.0;
  for (int h = 0; h < heads_; ++h) {
    lp += d.log_probs[static_cast<std::size_t>(h * width_ + digit(action, h))];
  }
  return lp;
}

std::uint64_t PolicyHead::sample(const Dist& d, Rng& rng) const {
  std::uint64_t action = 0;
  std::uint64_t place = 1;
  for (int h = 0; h < heads_; ++h) {
    const std::span<const double> p(d.probs.data() + h * width_, static_cast<std::size_t>(width_));
    action += sample_categorical(p, rng) * place;
    place *= static_cast<std::uint64_t>(width_);
  }
  return action;
}

std::uint64_t PolicyHead::mode(std::span<const double> logits) const {
  std::uint64_t action = 0;
  std::uint64_t place = 1;
  for (int h = 0; h < heads_; ++h) {
    action += argmax(logits.subspan(static_cast<std::size_t>(h * width_),
                                    static_cast<std::size_t>(width_))) *
              place;
    place *= static_cast<std::uint64_t>(width_);
  }
  return action;
}

void PolicyHead::add_log_prob_grad(const Dist& d, std::uint64_t action, double coef,
                                   Eigen::Ref<Eigen::VectorXd> grad) const {
  // d log p_a / dz_k = 1[k=a] - p_k, per head
  for (int h = 0; h < heads_; ++h) {
    const int base = h * width_;
    for (int k = 0; k < width_; ++k) grad(base + k) -= coef * d.probs[static_cast<std::size_t>(base + k)];
    grad(base + digit(action, h)) += coef;
  }
}

void PolicyHead::add_entropy_grad(const Dist& d, double coef,
                                  Eigen::Ref<Eigen::VectorXd> grad) const {
  if (coef == 0.0) return;
  // dH/dz_k = -p_k (log p_k + H), per head
  for (int h = 0; h < heads_; ++h) {
    const int base = h * width_;
    const double hh = d.head_entropy[static_cast<std::size_t>(h)];
    for (int k = 0; k < width_; ++k) {
      const auto i = static_cast<std::size_t>(base + k);
      grad(base + k) -= coef * d.probs[i] * (d.log_probs[i] + hh);
    }
  }
}

}  // namespace dlalloc::rl
