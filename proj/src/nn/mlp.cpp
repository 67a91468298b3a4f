#include "dlalloc/nn/mlp.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "dlalloc/errors.hpp"

namespace dlalloc::nn {
namespace {

void check_sizes(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw InvalidParameter("Mlp: need at least input and output sizes");
  for (int s : sizes) {
    if (s < 1) throw InvalidParameter("Mlp: layer widths must be >= 1");
  }
}

}  // namespace

Gradients& Gradients::operator+=(const Gradients& other) {
  if (other.layers.size() != layers.size()) {
    throw InvalidParameter("Gradients: shape mismatch");
  }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    layers[k].weight += other.layers[k].weight;
    layers[k].bias += other.layers[k].bias;
  }
  return *this;
}

Gradients& Gradients::operator*=(double scale) {
  for (auto& l : layers) {
    l.weight *= scale;
    l.bias *= scale;
  }
  return *this;
}

double Gradients::global_norm() const {
  double sq = 0.0;
  for (const auto& l : layers) sq += l.weight.squaredNorm() + l.bias.squaredNorm();
  return std::sqrt(sq);
}

double Gradients::clip_global_norm(double max_norm) {
  const double norm = global_norm();
  if (max_norm > 0 && norm > max_norm) *this *= max_norm / norm;
  return norm;
}

bool Gradients::all_finite() const {
  for (const auto& l : layers) {
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  }
  return true;
}

Mlp::Mlp(std::vector<int> layer_sizes, Rng& rng) : sizes_(std::move(layer_sizes)) {
  check_sizes(sizes_);
  layers_.reserve(sizes_.size() - 1);
  for (std::size_t k = 0; k + 1 < sizes_.size(); ++k) {
    const int in = sizes_[k];
    const int out = sizes_[k + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Layer layer{Matrix(out, in), Vector::Zero(out)};
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.weight(r, c) = rng.uniform(-bound, bound);
    }
    layers_.push_back(std::move(layer));
  }
}

Mlp Mlp::zeros(std::vector<int> layer_sizes) {
  check_sizes(layer_sizes);
  Mlp net;
  net.sizes_ = std::move(layer_sizes);
  for (std::size_t k = 0; k + 1 < net.sizes_.size(); ++k) {
    net.layers_.push_back(
        {Matrix::Zero(net.sizes_[k + 1], net.sizes_[k]), Vector::Zero(net.sizes_[k + 1])});
  }
  return net;
}

Matrix Mlp::forward(const Matrix& input, ForwardCache* cache) const {
  if (layers_.empty()) throw InvalidState("Mlp::forward on an empty network");
  if (input.rows() != input_size()) {
    throw InvalidParameter("Mlp::forward: input has " + std::to_string(input.rows()) +
                           " rows, expected " + std::to_string(input_size()));
  }
  if (cache != nullptr) {
    cache->activations.clear();
    cache->activations.reserve(layers_.size() + 1);
    cache->activations.push_back(input);
    cache->owner = this;
    cache->version = version_;
  }
  Matrix x = input;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    Matrix z = layers_[k].weight * x;
    z.colwise() += layers_[k].bias;
    if (k + 1 < layers_.size()) z = z.cwiseMax(0.0);
    if (cache != nullptr) cache->activations.push_back(z);
    x = std::move(z);
  }
  return x;
}

Vector Mlp::forward(std::span<const double> input) const {
  const Eigen::Map<const Matrix> x(input.data(), static_cast<Eigen::Index>(input.size()), 1);
  return forward(Matrix(x)).col(0);
}

Gradients Mlp::backward(const ForwardCache& cache, const Matrix& output_grad) const {
  return backward(cache, output_grad, nullptr);
}

Gradients Mlp::backward(const ForwardCache& cache, const Matrix& output_grad,
                        Matrix* input_grad) const {
  if (cache.owner != this || cache.version != version_ ||
      cache.activations.size() != layers_.size() + 1) {
    throw InvalidState("Mlp::backward: cache does not belong to the current parameters");
  }
  const Matrix& out = cache.activations.back();
  if (output_grad.rows() != out.rows() || output_grad.cols() != out.cols()) {
    throw InvalidParameter("Mlp::backward: output gradient shape mismatch");
  }
  Gradients g;
  g.layers.resize(layers_.size());
  Matrix delta = output_grad;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    const Matrix& a_in = cache.activations[k];
    g.layers[k].weight = delta * a_in.transpose();
    g.layers[k].bias = delta.rowwise().sum();
    if (k > 0 || input_grad != nullptr) {
      Matrix upstream = layers_[k].weight.transpose() * delta;
      if (k > 0) {
        // ReLU: a_in > 0 exactly where its pre-activation was positive.
        upstream = upstream.cwiseProduct(
            (a_in.array() > 0.0).cast<double>().matrix());
      } else {
        *input_grad = upstream;
      }
      delta = std::move(upstream);
    }
  }
  return g;
}

Gradients Mlp::zero_gradients() const {
  Gradients g;
  for (const auto& l : layers_) {
    g.layers.push_back({Matrix::Zero(l.weight.rows(), l.weight.cols()),
                        Vector::Zero(l.bias.size())});
  }
  return g;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

std::vector<double> Mlp::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& l : layers_) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) flat.push_back(l.weight(r, c));
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) flat.push_back(l.bias(r));
  }
  return flat;
}

void Mlp::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    throw InvalidParameter("Mlp::assign: expected " + std::to_string(parameter_count()) +
                           " values, got " + std::to_string(flat.size()));
  }
  std::size_t k = 0;
  for (auto& l : mutable_layers()) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = flat[k++];
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = flat[k++];
  }
}

}  // namespace dlalloc::nn
