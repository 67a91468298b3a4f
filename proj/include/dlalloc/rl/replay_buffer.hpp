#ifndef DLALLOC_RL_REPLAY_BUFFER_HPP_
#define DLALLOC_RL_REPLAY_BUFFER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dlalloc/nn/mlp.hpp"
#include "dlalloc/rng.hpp"

namespace dlalloc::rl {

struct Transition {
  std::vector<double> state;
  std::uint64_t action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;
};

// Column-major gathered minibatch.
struct TransitionBatch {
  nn::Matrix states;       // state_size x B
  nn::Matrix next_states;  // state_size x B
  std::vector<std::uint64_t> actions;
  std::vector<double> rewards;
  std::vector<bool> dones;
};

// Fixed-capacity ring of transitions; the oldest entry is overwritten once
// full.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t state_size);

  void push(const Transition& t);
  void push(std::span<const double> state, std::uint64_t action, double reward,
            std::span<const double> next_state, bool done);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t state_size() const { return state_size_; }
  bool full() const { return size_ == capacity_; }

  // Logical index 0 is the oldest stored transition.
  Transition at(std::size_t index) const;

  // `batch` distinct indices drawn uniformly (Floyd's algorithm), in draw
  // order. Requires batch <= size().
  std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const;
  TransitionBatch gather(std::span<const std::size_t> indices) const;
  TransitionBatch sample(std::size_t batch, Rng& rng) const {
    return gather(sample_indices(batch, rng));
  }

 private:
  std::size_t slot(std::size_t logical) const;

  std::size_t capacity_;
  std::size_t state_size_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;  // next slot to write
  nn::Matrix states_;
  nn::Matrix next_states_;
  std::vector<std::uint64_t> actions_;
  std::vector<double> rewards_;
  std::vector<std::uint8_t> dones_;
};

}  // namespace dlalloc::rl

#endif  // DLALLOC_RL_REPLAY_BUFFER_HPP_
