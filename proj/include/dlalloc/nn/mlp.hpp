#ifndef DLALLOC_NN_MLP_HPP_
#define DLALLOC_NN_MLP_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "dlalloc/rng.hpp"

namespace dlalloc::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Layer {
  Matrix weight;  // out x in
  Vector bias;    // out
};

// Per-parameter gradients, shaped like the network they differentiate.
struct Gradients {
  std::vector<Layer> layers;

  Gradients& operator+=(const Gradients& other);
  Gradients& operator*=(double scale);
  double global_norm() const;
  // Rescales to at most max_norm; returns the norm before clipping.
  double clip_global_norm(double max_norm);
  bool all_finite() const;
};

// Activations retained by a forward pass. Only valid for the network (and
// parameter version) that produced it.
struct ForwardCache {
  std::vector<Matrix> activations;  // [0] = input, [k] = output of layer k
  const void* owner = nullptr;
  std::uint64_t version = 0;
};

// Fully connected network: affine layers, ReLU between them, linear output.
// Inputs are column batches (features x batch).
class Mlp {
 public:
  Mlp() = default;

  // Fan-in uniform init: W ~ U(-1/sqrt(in), 1/sqrt(in)), b = 0.
  Mlp(std::vector<int> layer_sizes, Rng& rng);

  static Mlp zeros(std::vector<int> layer_sizes);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  const std::vector<Layer>& layers() const { return layers_; }
  // Mutable access invalidates outstanding caches.
  std::vector<Layer>& mutable_layers() {
    ++version_;
    return layers_;
  }

  Matrix forward(const Matrix& input, ForwardCache* cache = nullptr) const;
  Vector forward(std::span<const double> input) const;

  // Reverse-mode gradients of a scalar loss given dLoss/dOutput.
  Gradients backward(const ForwardCache& cache, const Matrix& output_grad) const;
  // Also returns dLoss/dInput.
  Gradients backward(const ForwardCache& cache, const Matrix& output_grad,
                     Matrix* input_grad) const;

  Gradients zero_gradients() const;
  std::size_t parameter_count() const;

  // Flattened parameters: per layer, weight row-major then bias.
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);

  std::uint64_t version() const { return version_; }

 private:
  std::vector<int> sizes_;
  std::vector<Layer> layers_;
  std::uint64_t version_ = 0;
};

}  // namespace dlalloc::nn

#endif  // DLALLOC_NN_MLP_HPP_
