#include "hyperncs/dense_net.hpp"

#include <cmath>
#include <random>
#include <string>

namespace hyperncs::net {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
    case Activation::kIdentity: return "identity";
  }
  throw std::invalid_argument("unknown activation");
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  if (name == "identity") return Activation::kIdentity;
  throw std::invalid_argument("unknown activation: " + name);
}

namespace {

Eigen::VectorXd apply_activation(Activation a, const Eigen::VectorXd& z) {
  switch (a) {
    case Activation::kTanh: return z.array().tanh();
    case Activation::kRelu: return z.cwiseMax(0.0);
    case Activation::kIdentity: return z;
  }
  throw std::invalid_argument("unknown activation");
}

Eigen::VectorXd activation_grad(Activation a, const Eigen::VectorXd& z,
                                const Eigen::VectorXd& post) {
  switch (a) {
    case Activation::kTanh: return 1.0 - post.array().square();
    case Activation::kRelu: return (z.array() > 0.0).cast<double>();
    case Activation::kIdentity: return Eigen::VectorXd::Ones(z.size());
  }
  throw std::invalid_argument("unknown activation");
}

}  // namespace

DenseNet make_dense_net(const std::vector<int>& layer_dims,
                        Activation hidden_act, std::uint64_t seed) {
  if (layer_dims.size() < 2) {
    throw std::invalid_argument("make_dense_net: need at least two layer dims");
  }
  for (int d : layer_dims) {
    if (d <= 0) throw std::invalid_argument("make_dense_net: non-positive dim");
  }
  DenseNet net;
  net.layer_dims = layer_dims;
  std::mt19937_64 rng(seed);
  const int layers = static_cast<int>(layer_dims.size()) - 1;
  for (int l = 0; l < layers; ++l) {
    const int fan_in = layer_dims[l];
    const int fan_out = layer_dims[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        w(r, c) = dist(rng);
      }
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    net.activations.push_back(l + 1 < layers ? hidden_act
                                             : Activation::kIdentity);
  }
  return net;
}

void Gradients::setZero(const DenseNet& net) {
  const size_t layers = static_cast<size_t>(net.num_layers());
  if (weights.size() == layers) {  // reuse storage on the training hot path
    bool same = true;
    for (size_t l = 0; l < layers; ++l) {
      if (weights[l].rows() != net.weights[l].rows() ||
          weights[l].cols() != net.weights[l].cols()) {
        same = false;
        break;
      }
    }
    if (same) {
      for (size_t l = 0; l < layers; ++l) {
        weights[l].setZero();
        biases[l].setZero();
      }
      input = Eigen::VectorXd::Zero(net.input_dim());
      return;
    }
  }
  weights.clear();
  biases.clear();
  for (int l = 0; l < net.num_layers(); ++l) {
    weights.push_back(
        Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    biases.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  input = Eigen::VectorXd::Zero(net.input_dim());
}

void Gradients::accumulate(const Gradients& other) {
  for (size_t l = 0; l < weights.size(); ++l) {
    weights[l] += other.weights[l];
    biases[l] += other.biases[l];
  }
  input += other.input;
}

void Gradients::scale(double s) {
  for (size_t l = 0; l < weights.size(); ++l) {
    weights[l] *= s;
    biases[l] *= s;
  }
  input *= s;
}

bool Gradients::allFinite() const {
  for (size_t l = 0; l < weights.size(); ++l) {
    if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
  }
  return true;
}

Eigen::VectorXd forward(const DenseNet& net, const Eigen::VectorXd& input,
                        ForwardCache* cache) {
  if (input.size() != net.input_dim()) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  if (cache) {
    cache->input = input;
    cache->pre_activations.clear();
    cache->activations.clear();
  }
  Eigen::VectorXd a = input;
  for (int l = 0; l < net.num_layers(); ++l) {
    Eigen::VectorXd z = net.weights[l] * a + net.biases[l];
    a = apply_activation(net.activations[l], z);
    if (cache) {
      cache->pre_activations.push_back(std::move(z));
      cache->activations.push_back(a);
    }
  }
  return a;
}

Gradients backward(const DenseNet& net, const ForwardCache& cache,
                   const Eigen::VectorXd& output_gradient) {
  const int layers = net.num_layers();
  if (static_cast<int>(cache.activations.size()) != layers ||
      cache.input.size() != net.input_dim()) {
    throw std::invalid_argument("backward: cache does not match net");
  }
  if (output_gradient.size() != net.output_dim()) {
    throw std::invalid_argument("backward: output gradient dimension mismatch");
  }
  Gradients g;
  g.weights.resize(layers);
  g.biases.resize(layers);
  Eigen::VectorXd grad = output_gradient;
  for (int l = layers - 1; l >= 0; --l) {
    const Eigen::VectorXd dz =
        grad.array() * activation_grad(net.activations[l],
                                       cache.pre_activations[l],
                                       cache.activations[l])
                           .array();
    const Eigen::VectorXd& prev =
        (l == 0) ? cache.input : cache.activations[l - 1];
    g.weights[l] = dz * prev.transpose();
    g.biases[l] = dz;
    grad = net.weights[l].transpose() * dz;
  }
  g.input = grad;
  return g;
}

Eigen::VectorXd backward_accumulate(const DenseNet& net,
                                    const ForwardCache& cache,
                                    const Eigen::VectorXd& output_gradient,
                                    Gradients& acc) {
  const int layers = net.num_layers();
  if (static_cast<int>(cache.activations.size()) != layers ||
      cache.input.size() != net.input_dim()) {
    throw std::invalid_argument("backward_accumulate: cache does not match net");
  }
  if (static_cast<int>(acc.weights.size()) != layers) {
    throw std::invalid_argument("backward_accumulate: acc not sized for net");
  }
  Eigen::VectorXd grad = output_gradient;
  for (int l = layers - 1; l >= 0; --l) {
    const Eigen::VectorXd dz =
        grad.array() * activation_grad(net.activations[l],
                                       cache.pre_activations[l],
                                       cache.activations[l])
                           .array();
    const Eigen::VectorXd& prev =
        (l == 0) ? cache.input : cache.activations[l - 1];
    acc.weights[l].noalias() += dz * prev.transpose();
    acc.biases[l] += dz;
    grad.noalias() = net.weights[l].transpose() * dz;
  }
  return grad;
}

AdamState make_adam_state(const DenseNet& net, double learning_rate) {
  AdamState s;
  s.learning_rate = learning_rate;
  for (int l = 0; l < net.num_layers(); ++l) {
    s.m_weights.push_back(
        Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    s.v_weights.push_back(
        Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    s.m_biases.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    s.v_biases.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  return s;
}

void adam_step(DenseNet& net, const Gradients& grads, AdamState& state) {
  if (!grads.allFinite()) {
    throw TrainingDivergence("adam_step: non-finite gradients",
                             state.step_count + 1);
  }
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(state.beta1, t);
  const double bc2 = 1.0 - std::pow(state.beta2, t);
  for (int l = 0; l < net.num_layers(); ++l) {
    auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
      m = state.beta1 * m + (1.0 - state.beta1) * g;
      v = state.beta2 * v + (1.0 - state.beta2) * g.array().square().matrix();
      const auto m_hat = m / bc1;
      const auto v_hat = v / bc2;
      param.array() -= state.learning_rate * m_hat.array() /
                       (v_hat.array().sqrt() + state.epsilon);
    };
    update(net.weights[l], state.m_weights[l], state.v_weights[l],
           grads.weights[l]);
    update(net.biases[l], state.m_biases[l], state.v_biases[l],
           grads.biases[l]);
  }
}

void sgd_step(DenseNet& net, const Gradients& grads, double learning_rate) {
  if (!grads.allFinite()) {
    throw TrainingDivergence("sgd_step: non-finite gradients", 0);
  }
  for (int l = 0; l < net.num_layers(); ++l) {
    net.weights[l] -= learning_rate * grads.weights[l];
    net.biases[l] -= learning_rate * grads.biases[l];
  }
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - m).exp();
  return e / e.sum();
}

}  // namespace hyperncs::net
