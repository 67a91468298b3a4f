#include "dlalloc/nn/adam.hpp"

#include <cmath>

#include "dlalloc/errors.hpp"

namespace dlalloc::nn {

Adam::Adam(const Mlp& shape, AdamOptions options) : options_(options) {
  m_ = shape.zero_gradients().layers;
  v_ = m_;
}

void Adam::step(Mlp& params, const Gradients& grads) {
  if (grads.layers.size() != m_.size()) {
    throw InvalidParameter("Adam::step: gradient/moment shape mismatch");
  }
  for (std::size_t k = 0; k < m_.size(); ++k) {
    if (grads.layers[k].weight.rows() != m_[k].weight.rows() ||
        grads.layers[k].weight.cols() != m_[k].weight.cols() ||
        grads.layers[k].bias.size() != m_[k].bias.size()) {
      throw InvalidParameter("Adam::step: gradient/moment shape mismatch");
    }
  }
  if (!grads.all_finite()) throw NumericError("Adam::step: non-finite gradient");

  ++steps_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  const double lr = options_.lr;
  const double eps = options_.eps;

  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  auto& layers = params.mutable_layers();
  for (std::size_t k = 0; k < m_.size(); ++k) {
    update(layers[k].weight, m_[k].weight, v_[k].weight, grads.layers[k].weight);
    update(layers[k].bias, m_[k].bias, v_[k].bias, grads.layers[k].bias);
  }
}

std::vector<double> Adam::flatten_moments() const {
  std::vector<double> flat;
  for (const auto* moments : {&m_, &v_}) {
    for (const auto& l : *moments) {
      for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < l.weight.cols(); ++c) flat.push_back(l.weight(r, c));
      }
      for (Eigen::Index r = 0; r < l.bias.size(); ++r) flat.push_back(l.bias(r));
    }
  }
  return flat;
}

void Adam::assign_moments(std::span<const double> flat, std::int64_t step_count) {
  std::size_t expected = 0;
  for (const auto& l : m_) expected += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  if (flat.size() != 2 * expected) throw InvalidParameter("Adam: moment buffer size mismatch");
  if (step_count < 0) throw InvalidParameter("Adam: negative step count");
  std::size_t k = 0;
  for (auto* moments : {&m_, &v_}) {
    for (auto& l : *moments) {
      for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = flat[k++];
      }
      for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = flat[k++];
    }
  }
  steps_ = step_count;
}

}  // namespace dlalloc::nn
