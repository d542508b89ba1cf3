#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperncs::net {

enum class Activation { kTanh, kRelu, kIdentity };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// Signalled when a training loop produces non-finite losses or gradients.
class TrainingDivergence : public std::runtime_error {
 public:
  TrainingDivergence(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Plain fully connected network. weights[l] maps layer_dims[l] ->
/// layer_dims[l+1]; activations[l] is applied after the affine step of layer
/// l (the output layer conventionally uses kIdentity).
struct DenseNet {
  std::vector<int> layer_dims;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  std::vector<Activation> activations;

  int input_dim() const { return layer_dims.front(); }
  int output_dim() const { return layer_dims.back(); }
  int num_layers() const { return static_cast<int>(weights.size()); }
};

/// Glorot-uniform initialised net; hidden layers use `hidden_act`, the output
/// layer is linear.
DenseNet make_dense_net(const std::vector<int>& layer_dims,
                        Activation hidden_act, std::uint64_t seed);

struct ForwardCache {
  Eigen::VectorXd input;
  std::vector<Eigen::VectorXd> pre_activations;
  std::vector<Eigen::VectorXd> activations;  // post-activation per layer
};

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  Eigen::VectorXd input;  // dLoss/dinput

  void setZero(const DenseNet& net);
  void accumulate(const Gradients& other);
  void scale(double s);
  bool allFinite() const;
};

Eigen::VectorXd forward(const DenseNet& net, const Eigen::VectorXd& input,
                        ForwardCache* cache = nullptr);

/// Reverse-mode gradients of the forward map for upstream gradient
/// dLoss/doutput. The cache must come from a forward call on the same net.
Gradients backward(const DenseNet& net, const ForwardCache& cache,
                   const Eigen::VectorXd& output_gradient);

/// Same reverse sweep, but accumulates parameter gradients straight into
/// `acc` (pre-sized via setZero) instead of materialising per-sample
/// matrices. Returns the input gradient. This is the minibatch hot path.
Eigen::VectorXd backward_accumulate(const DenseNet& net,
                                    const ForwardCache& cache,
                                    const Eigen::VectorXd& output_gradient,
                                    Gradients& acc);

struct AdamState {
  std::vector<Eigen::MatrixXd> m_weights, v_weights;
  std::vector<Eigen::VectorXd> m_biases, v_biases;
  long step_count = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam_state(const DenseNet& net, double learning_rate = 1e-3);

/// One Adam update with bias correction. Throws TrainingDivergence on
/// non-finite gradients.
void adam_step(DenseNet& net, const Gradients& grads, AdamState& state);

/// Plain SGD update (the degenerate form RSGD takes when all parameters are
/// Euclidean). Throws TrainingDivergence on non-finite gradients.
void sgd_step(DenseNet& net, const Gradients& grads, double learning_rate);

/// Stable softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

}  // namespace hyperncs::net
