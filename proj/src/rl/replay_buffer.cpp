#include "dlalloc/rl/replay_buffer.hpp"

#include <algorithm>

#include "dlalloc/errors.hpp"

namespace dlalloc::rl {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t state_size)
    : capacity_(capacity), state_size_(state_size) {
  if (capacity == 0) throw InvalidParameter("ReplayBuffer: capacity must be >= 1");
  const auto rows = static_cast<Eigen::Index>(state_size);
  const auto cols = static_cast<Eigen::Index>(capacity);
  states_.resize(rows, cols);
  next_states_.resize(rows, cols);
  actions_.resize(capacity);
  rewards_.resize(capacity);
  dones_.resize(capacity);
}

void ReplayBuffer::push(std::span<const double> state, std::uint64_t action,
                        double reward, std::span<const double> next_state,
                        bool done) {
  if (state.size() != state_size_ || next_state.size() != state_size_) {
    throw InvalidParameter("ReplayBuffer::push: state length mismatch");
  }
  const auto col = static_cast<Eigen::Index>(head_);
  for (std::size_t r = 0; r < state_size_; ++r) {
    states_(static_cast<Eigen::Index>(r), col) = state[r];
    next_states_(static_cast<Eigen::Index>(r), col) = next_state[r];
  }
  actions_[head_] = action;
  rewards_[head_] = reward;
  dones_[head_] = done ? 1 : 0;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

void ReplayBuffer::push(const Transition& t) {
  push(t.state, t.action, t.reward, t.next_state, t.done);
}

std::size_t ReplayBuffer::slot(std::size_t logical) const {
  const std::size_t oldest = size_ < capacity_ ? 0 : head_;
  return (oldest + logical) % capacity_;
}

Transition ReplayBuffer::at(std::size_t index) const {
  if (index >= size_) throw InvalidParameter("ReplayBuffer::at: index out of range");
  const auto col = static_cast<Eigen::Index>(slot(index));
  Transition t;
  t.state.assign(states_.col(col).data(), states_.col(col).data() + state_size_);
  t.next_state.assign(next_states_.col(col).data(),
                      next_states_.col(col).data() + state_size_);
  t.action = actions_[static_cast<std::size_t>(col)];
  t.reward = rewards_[static_cast<std::size_t>(col)];
  t.done = dones_[static_cast<std::size_t>(col)] != 0;
  return t;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, Rng& rng) const {
  if (batch > size_) throw InvalidParameter("ReplayBuffer::sample: batch exceeds size");
  // Floyd: for j in [n-k, n), pick t in [0, j]; take t unless seen, else j.
  std::vector<std::size_t> picked;
  picked.reserve(batch);
  for (std::size_t j = size_ - batch; j < size_; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    if (std::find(picked.begin(), picked.end(), t) == picked.end()) {
      picked.push_back(t);
    } else {
      picked.push_back(j);
    }
  }
  return picked;
}

TransitionBatch ReplayBuffer::gather(std::span<const std::size_t> indices) const {
  TransitionBatch b;
  const auto rows = static_cast<Eigen::Index>(state_size_);
  const auto n = static_cast<Eigen::Index>(indices.size());
  b.states.resize(rows, n);
  b.next_states.resize(rows, n);
  b.actions.resize(indices.size());
  b.rewards.resize(indices.size());
  b.dones.resize(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= size_) throw InvalidParameter("ReplayBuffer::gather: index out of range");
    const auto col = static_cast<Eigen::Index>(slot(indices[k]));
    b.states.col(static_cast<Eigen::Index>(k)) = states_.col(col);
    b.next_states.col(static_cast<Eigen::Index>(k)) = next_states_.col(col);
    b.actions[k] = actions_[static_cast<std::size_t>(col)];
    b.rewards[k] = rewards_[static_cast<std::size_t>(col)];
    b.dones[k] = dones_[static_cast<std::size_t>(col)] != 0;
  }
  return b;
}

}  // namespace dlalloc::rl
