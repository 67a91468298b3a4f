#ifndef DLALLOC_NN_ADAM_HPP_
#define DLALLOC_NN_ADAM_HPP_

#include <cstdint>
#include <vector>

#include "dlalloc/nn/mlp.hpp"

namespace dlalloc::nn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam with moment buffers shaped like the network.
class Adam {
 public:
  Adam() = default;
  Adam(const Mlp& shape, AdamOptions options);

  // Throws NumericError (leaving params and moments untouched) if any
  // gradient is non-finite.
  void step(Mlp& params, const Gradients& grads);

  const AdamOptions& options() const { return options_; }
  void set_lr(double lr) { options_.lr = lr; }
  std::int64_t step_count() const { return steps_; }

  const std::vector<Layer>& first_moment() const { return m_; }
  const std::vector<Layer>& second_moment() const { return v_; }

  std::vector<double> flatten_moments() const;  // m then v, same layout as Mlp
  void assign_moments(std::span<const double> flat, std::int64_t step_count);

 private:
  AdamOptions options_;
  std::vector<Layer> m_;
  std::vector<Layer> v_;
  std::int64_t steps_ = 0;
};

// A network plus the optimizer state that trains it.
struct ApproximatorParams {
  Mlp net;
  Adam optimizer;
};

}  // namespace dlalloc::nn

#endif  // DLALLOC_NN_ADAM_HPP_
