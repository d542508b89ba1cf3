#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperncs/checkpoint.hpp"
#include "hyperncs/dense_net.hpp"

using namespace hyperncs;
using net::Activation;
using net::DenseNet;

namespace {

// Central finite differences of a scalar loss w.r.t. one parameter entry.
// Deliberately goes through nothing but forward().
double fd_weight(DenseNet net, int layer, int r, int c,
                 const Eigen::VectorXd& input, const Eigen::VectorXd& probe,
                 double h) {
  net.weights[layer](r, c) += h;
  const double up = probe.dot(net::forward(net, input));
  net.weights[layer](r, c) -= 2 * h;
  const double down = probe.dot(net::forward(net, input));
  return (up - down) / (2 * h);
}

double fd_bias(DenseNet net, int layer, int r, const Eigen::VectorXd& input,
               const Eigen::VectorXd& probe, double h) {
  net.biases[layer][r] += h;
  const double up = probe.dot(net::forward(net, input));
  net.biases[layer][r] -= 2 * h;
  const double down = probe.dot(net::forward(net, input));
  return (up - down) / (2 * h);
}

bool nets_equal(const DenseNet& a, const DenseNet& b) {
  if (a.layer_dims != b.layer_dims) return false;
  for (int l = 0; l < a.num_layers(); ++l) {
    if (a.weights[l] != b.weights[l] || a.biases[l] != b.biases[l]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("forward analytic cases") {
  DenseNet net = net::make_dense_net({3, 3}, Activation::kTanh, 1);
  net.weights[0] = Eigen::MatrixXd::Identity(3, 3);
  net.biases[0] = Eigen::VectorXd::Zero(3);
  const Eigen::VectorXd v = (Eigen::VectorXd(3) << 1.0, -2.0, 0.5).finished();
  CHECK((net::forward(net, v) - v).norm() == 0.0);

  net.weights[0].setZero();
  CHECK(net::forward(net, v).norm() == 0.0);

  CHECK_THROWS_AS(net::forward(net, Eigen::VectorXd::Zero(4)),
                  std::invalid_argument);
}

TEST_CASE("backward analytic case: linear layer") {
  DenseNet net = net::make_dense_net({3, 2}, Activation::kIdentity, 2);
  const Eigen::VectorXd x = (Eigen::VectorXd(3) << 0.5, -1.0, 2.0).finished();
  const Eigen::VectorXd g = (Eigen::VectorXd(2) << 1.5, -0.25).finished();
  net::ForwardCache cache;
  net::forward(net, x, &cache);
  const net::Gradients grads = net::backward(net, cache, g);
  CHECK((grads.weights[0] - g * x.transpose()).norm() < 1e-15);
  CHECK((grads.biases[0] - g).norm() < 1e-15);
  CHECK((grads.input - net.weights[0].transpose() * g).norm() < 1e-15);

  const net::Gradients zero = net::backward(net, cache, Eigen::VectorXd::Zero(2));
  CHECK(zero.weights[0].norm() == 0.0);
  CHECK(zero.biases[0].norm() == 0.0);
}

TEST_CASE("backward rejects a mismatched cache") {
  DenseNet a = net::make_dense_net({3, 4, 2}, Activation::kTanh, 3);
  DenseNet b = net::make_dense_net({5, 2}, Activation::kTanh, 4);
  net::ForwardCache cache;
  net::forward(a, Eigen::VectorXd::Zero(3), &cache);
  CHECK_THROWS_AS(net::backward(b, cache, Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
}

TEST_CASE("gradients match central finite differences") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double h = 1e-5;
  for (auto act : {Activation::kTanh, Activation::kRelu}) {
    DenseNet net = net::make_dense_net({4, 6, 3}, act, 31);
    for (int trial = 0; trial < 40; ++trial) {
      const Eigen::VectorXd x =
          Eigen::VectorXd::NullaryExpr(4, [&](auto) { return gauss(rng); });
      const Eigen::VectorXd probe =
          Eigen::VectorXd::NullaryExpr(3, [&](auto) { return gauss(rng); });
      net::ForwardCache cache;
      net::forward(net, x, &cache);
      if (act == Activation::kRelu) {
        // keep probes away from the kink where the derivative jumps
        bool near_kink = false;
        for (const auto& z : cache.pre_activations) {
          if ((z.array().abs() < 1e-3).any()) near_kink = true;
        }
        if (near_kink) continue;
      }
      const net::Gradients grads = net::backward(net, cache, probe);
      std::uniform_int_distribution<int> pick_layer(0, net.num_layers() - 1);
      for (int k = 0; k < 6; ++k) {
        const int l = pick_layer(rng);
        std::uniform_int_distribution<int> pick_r(0, net.weights[l].rows() - 1);
        std::uniform_int_distribution<int> pick_c(0, net.weights[l].cols() - 1);
        const int r = pick_r(rng), c = pick_c(rng);
        const double fd = fd_weight(net, l, r, c, x, probe, h);
        const double an = grads.weights[l](r, c);
        CHECK(std::abs(an - fd) <= 1e-4 * std::max({std::abs(an), std::abs(fd), 1.0}));
        const double fd_b = fd_bias(net, l, r, x, probe, h);
        const double an_b = grads.biases[l][r];
        CHECK(std::abs(an_b - fd_b) <=
              1e-4 * std::max({std::abs(an_b), std::abs(fd_b), 1.0}));
      }
    }
  }
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  DenseNet net = net::make_dense_net({2, 3, 2}, Activation::kTanh, 5);
  const DenseNet before = net;
  net::AdamState state = net::make_adam_state(net);
  net::Gradients zero;
  zero.setZero(net);
  for (int i = 0; i < 10; ++i) net::adam_step(net, zero, state);
  CHECK(nets_equal(net, before));
  CHECK(state.step_count == 10);
}

TEST_CASE("adam: first step equals -lr * g / (|g| + eps)") {
  // hand-evaluated recurrence at t=1: bias corrections cancel exactly
  DenseNet net = net::make_dense_net({1, 1}, Activation::kIdentity, 6);
  const double w0 = net.weights[0](0, 0);
  net::AdamState state = net::make_adam_state(net, 1e-3);
  net::Gradients g;
  g.setZero(net);
  g.weights[0](0, 0) = 0.37;
  net::adam_step(net, g, state);
  const double expected = w0 - 1e-3 * 0.37 / (std::abs(0.37) + 1e-8);
  CHECK(net.weights[0](0, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("adam rejects non-finite gradients") {
  DenseNet net = net::make_dense_net({2, 2}, Activation::kIdentity, 7);
  net::AdamState state = net::make_adam_state(net);
  net::Gradients g;
  g.setZero(net);
  g.weights[0](0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(net::adam_step(net, g, state), net::TrainingDivergence);
}

TEST_CASE("identical seeds give identical trajectories") {
  auto trajectory = [] {
    DenseNet net = net::make_dense_net({3, 5, 2}, Activation::kTanh, 99);
    net::AdamState state = net::make_adam_state(net, 1e-2);
    std::mt19937_64 rng(1234);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int step = 0; step < 25; ++step) {
      const Eigen::VectorXd x =
          Eigen::VectorXd::NullaryExpr(3, [&](auto) { return gauss(rng); });
      net::ForwardCache cache;
      const Eigen::VectorXd out = net::forward(net, x, &cache);
      net::adam_step(net, net::backward(net, cache, out), state);
    }
    return net;
  };
  CHECK(nets_equal(trajectory(), trajectory()));
}

TEST_CASE("checkpoint round trip and rejection") {
  DenseNet net = net::make_dense_net({3, 4, 2}, Activation::kTanh, 8);
  const std::string text = checkpoint::dense_net_to_json(net);
  const DenseNet loaded = checkpoint::dense_net_from_json(text);
  CHECK(nets_equal(net, loaded));

  // tampered dims must be rejected
  std::string bad = text;
  const auto pos = bad.find("\"layer_dims\":[3,4,2]");
  REQUIRE(pos != std::string::npos);
  bad.replace(pos, std::string("\"layer_dims\":[3,4,2]").size(),
              "\"layer_dims\":[3,5,2]");
  CHECK_THROWS_AS(checkpoint::dense_net_from_json(bad), std::invalid_argument);

  CHECK_THROWS_AS(checkpoint::dense_net_from_json("{\"format\":\"nope\"}"),
                  std::invalid_argument);
}
