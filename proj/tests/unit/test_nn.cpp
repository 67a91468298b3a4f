#include <doctest.h>

#include <cmath>
#include <limits>

#include "dlalloc/errors.hpp"
#include "dlalloc/nn/adam.hpp"
#include "dlalloc/nn/checkpoint.hpp"
#include "dlalloc/nn/distributions.hpp"
#include "dlalloc/nn/mlp.hpp"
#include "oracles.hpp"

using namespace dlalloc;
using nn::Matrix;

namespace {

nn::Mlp scalar_net(double w, double b) {
  nn::Mlp net = nn::Mlp::zeros({1, 1});
  auto& layers = net.mutable_layers();
  layers[0].weight(0, 0) = w;
  layers[0].bias(0) = b;
  return net;
}

Matrix column(std::initializer_list<double> values) {
  Matrix m(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index k = 0;
  for (double v : values) m(k++, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("forward") {
  SUBCASE("zero network") {
    const auto net = nn::Mlp::zeros({3, 5, 2});
    const Matrix out = net.forward(column({1.0, -2.0, 3.0}));
    CHECK(out.isZero(0.0));
  }
  SUBCASE("affine scalar") {
    CHECK(scalar_net(2.0, 1.0).forward(column({3.0}))(0, 0) == 7.0);
  }
  SUBCASE("hidden rectifier") {
    nn::Mlp net = nn::Mlp::zeros({1, 1, 1});
    auto& layers = net.mutable_layers();
    layers[0].weight(0, 0) = 1.0;
    layers[0].bias(0) = -8.0;  // pre-activation 3 - 8 = -5
    layers[1].weight(0, 0) = 1.0;
    nn::ForwardCache cache;
    net.forward(column({3.0}), &cache);
    CHECK(cache.activations[1](0, 0) == 0.0);
  }
  SUBCASE("shape mismatch") {
    const auto net = nn::Mlp::zeros({3, 2});
    CHECK_THROWS_AS(net.forward(column({1.0, 2.0})), InvalidParameter);
  }
  SUBCASE("deterministic") {
    Rng rng(1);
    const nn::Mlp net({4, 8, 3}, rng);
    const Matrix x = Matrix::Random(4, 5);
    CHECK(net.forward(x) == net.forward(x));
  }
}

TEST_CASE("backward") {
  SUBCASE("scalar chain") {
    const auto net = scalar_net(3.0, 0.0);
    nn::ForwardCache cache;
    net.forward(column({2.0}), &cache);
    const auto g = net.backward(cache, column({1.0}));
    CHECK(g.layers[0].weight(0, 0) == 2.0);
    CHECK(g.layers[0].bias(0) == 1.0);
  }
  SUBCASE("zero output gradient") {
    Rng rng(2);
    const nn::Mlp net({3, 6, 2}, rng);
    nn::ForwardCache cache;
    net.forward(Matrix::Random(3, 4), &cache);
    const auto g = net.backward(cache, Matrix::Zero(2, 4));
    CHECK(g.global_norm() == 0.0);
  }
  SUBCASE("stale cache") {
    Rng rng(3);
    nn::Mlp net({2, 3, 1}, rng);
    nn::ForwardCache cache;
    net.forward(Matrix::Random(2, 1), &cache);
    net.mutable_layers()[0].bias(0) += 1.0;
    CHECK_THROWS_AS(net.backward(cache, Matrix::Ones(1, 1)), InvalidState);
    nn::Mlp other({2, 3, 1}, rng);
    nn::ForwardCache fresh;
    other.forward(Matrix::Random(2, 1), &fresh);
    CHECK_THROWS_AS(net.backward(fresh, Matrix::Ones(1, 1)), InvalidState);
  }
  SUBCASE("finite differences on random networks") {
    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
      const int depth = 1 + static_cast<int>(rng.below(3));
      std::vector<int> sizes{1 + static_cast<int>(rng.below(6))};
      for (int d = 0; d < depth; ++d) sizes.push_back(1 + static_cast<int>(rng.below(16)));
      const nn::Mlp net(sizes, rng);
      Matrix x(sizes.front(), 3);
      for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.uniform(-2.0, 2.0);
      Matrix c(sizes.back(), 3);
      for (Eigen::Index k = 0; k < c.size(); ++k) c.data()[k] = rng.uniform(-1.0, 1.0);
      const auto check = oracles::finite_difference_check(net, x, c);
      CHECK(check.worst_rel_error < 1e-4);
    }
  }
  SUBCASE("input gradient") {
    Rng rng(5);
    const nn::Mlp net({3, 4, 2}, rng);
    const Matrix x = Matrix::Random(3, 1);
    const Matrix c = Matrix::Random(2, 1);
    nn::ForwardCache cache;
    net.forward(x, &cache);
    Matrix dx;
    net.backward(cache, c, &dx);
    for (Eigen::Index k = 0; k < 3; ++k) {
      Matrix up = x;
      Matrix down = x;
      up(k, 0) += 1e-6;
      down(k, 0) -= 1e-6;
      const double numeric =
          ((net.forward(up).array() - net.forward(down).array()) * c.array()).sum() / 2e-6;
      CHECK(dx(k, 0) == doctest::Approx(numeric).epsilon(1e-5));
    }
  }
}

TEST_CASE("gradient clipping") {
  nn::Gradients g = nn::Mlp::zeros({2, 2}).zero_gradients();
  g.layers[0].weight.setConstant(3.0);
  g.layers[0].bias.setConstant(3.0);
  const double before = g.clip_global_norm(1.0);
  CHECK(before == doctest::Approx(std::sqrt(6.0 * 9.0)));
  CHECK(g.global_norm() == doctest::Approx(1.0));
  CHECK(g.clip_global_norm(0.0) == doctest::Approx(1.0));
  CHECK(g.global_norm() == doctest::Approx(1.0));
}

TEST_CASE("adam") {
  SUBCASE("first step with unit gradient") {
    auto net = scalar_net(0.0, 0.0);
    nn::Adam adam(net, {.lr = 1e-3});
    auto g = net.zero_gradients();
    g.layers[0].weight.setConstant(1.0);
    g.layers[0].bias.setConstant(1.0);
    adam.step(net, g);
    // m_hat = 1, v_hat = 1 -> delta = -lr / (1 + eps).
    CHECK(net.layers()[0].weight(0, 0) == doctest::Approx(-1e-3 / (1.0 + 1e-8)).epsilon(1e-12));
    CHECK(net.layers()[0].weight(0, 0) == doctest::Approx(-9.99999e-4).epsilon(1e-6));
    CHECK(adam.step_count() == 1);
  }
  SUBCASE("zero gradient leaves parameters") {
    Rng rng(6);
    nn::Mlp net({3, 4, 2}, rng);
    const auto before = net.flatten();
    nn::Adam adam(net, {.lr = 1e-2});
    adam.step(net, net.zero_gradients());
    CHECK(net.flatten() == before);
    CHECK(adam.step_count() == 1);
  }
  SUBCASE("two steps against a scalar trace") {
    auto net = scalar_net(0.5, 0.0);
    nn::Adam adam(net, {.lr = 0.1});
    auto g = net.zero_gradients();
    g.layers[0].weight.setConstant(2.0);
    double theta = 0.5;
    double m = 0.0;
    double v = 0.0;
    for (int t = 1; t <= 2; ++t) {
      adam.step(net, g);
      m = 0.9 * m + 0.1 * 2.0;
      v = 0.999 * v + 0.001 * 4.0;
      const double m_hat = m / (1.0 - std::pow(0.9, t));
      const double v_hat = v / (1.0 - std::pow(0.999, t));
      theta -= 0.1 * m_hat / (std::sqrt(v_hat) + 1e-8);
      CHECK(net.layers()[0].weight(0, 0) == doctest::Approx(theta).epsilon(1e-14));
    }
    CHECK(theta == doctest::Approx(0.3).epsilon(1e-7));
  }
  SUBCASE("zero learning rate is the identity") {
    Rng rng(7);
    nn::Mlp net({3, 4, 2}, rng);
    const auto before = net.flatten();
    nn::Adam adam(net, {.lr = 0.0});
    auto g = net.zero_gradients();
    for (auto& layer : g.layers) layer.weight.setConstant(0.3);
    adam.step(net, g);
    CHECK(net.flatten() == before);
  }
  SUBCASE("non-finite gradient") {
    auto net = scalar_net(1.0, 0.0);
    nn::Adam adam(net, {.lr = 0.1});
    auto g = net.zero_gradients();
    g.layers[0].weight(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(adam.step(net, g), NumericError);
    CHECK(net.layers()[0].weight(0, 0) == 1.0);
    CHECK(adam.step_count() == 0);
  }
}

TEST_CASE("softmax and entropy") {
  const std::vector<double> uniform{0.0, 0.0, 0.0, 0.0};
  const auto u = nn::softmax_and_entropy(uniform);
  for (double p : u.probs) CHECK(p == doctest::Approx(0.25));
  CHECK(u.entropy == doctest::Approx(std::log(4.0)).epsilon(1e-12));

  const std::vector<double> peaked{1e9, 0.0, 0.0};
  const auto d = nn::softmax_and_entropy(peaked);
  CHECK(d.probs[0] == 1.0);
  CHECK(d.entropy == doctest::Approx(0.0));

  Rng rng(8);
  std::vector<double> logits(10);
  for (auto& l : logits) l = rng.uniform(-5.0, 5.0);
  auto shifted = logits;
  for (auto& l : shifted) l += 123.4;
  const auto a = nn::softmax_and_entropy(logits);
  const auto b = nn::softmax_and_entropy(shifted);
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    CHECK(a.probs[k] == doctest::Approx(b.probs[k]).epsilon(1e-12));
    sum += a.probs[k];
  }
  CHECK(std::abs(sum - 1.0) < 1e-12);
  CHECK(a.entropy >= 0.0);
  CHECK(a.entropy <= std::log(10.0));

  CHECK(nn::kl_divergence(a.log_probs, a.log_probs) == 0.0);
  CHECK(std::abs(nn::kl_divergence(a.log_probs, b.log_probs)) < 1e-12);
}

TEST_CASE("checkpoint round trip") {
  Rng rng(9);
  nn::Mlp net({5, 7, 3}, rng);
  nn::Adam adam(net, {.lr = 3e-4});
  auto g = net.zero_gradients();
  for (auto& layer : g.layers) layer.weight.setConstant(0.1);
  adam.step(net, g);

  const auto doc = nn::to_json(nn::ApproximatorParams{net, adam});
  const auto text = doc.dump();
  const auto back = nn::params_from_json(nlohmann::json::parse(text), {5, 7, 3});
  CHECK(back.net.flatten() == net.flatten());
  CHECK(back.optimizer.flatten_moments() == adam.flatten_moments());
  CHECK(back.optimizer.step_count() == 1);
  CHECK(back.optimizer.options().lr == 3e-4);

  try {
    nn::mlp_from_json(doc, {5, 8, 3});
    FAIL("expected a size mismatch");
  } catch (const InvalidParameter& e) {
    const std::string msg = e.what();
    CHECK(msg.find(nn::describe_sizes({5, 8, 3})) != std::string::npos);
    CHECK(msg.find(nn::describe_sizes({5, 7, 3})) != std::string::npos);
  }
  auto wrong = doc;
  wrong["version"] = 99;
  CHECK_THROWS_AS(nn::mlp_from_json(wrong), InvalidParameter);
}
