#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "hyperncs/dense_net.hpp"

namespace hyperncs::embed {

/// Per-coordinate standardisation, fit once on the pretraining set and frozen.
struct Normalization {
  Eigen::VectorXd shift;
  Eigen::VectorXd scale;  // always > 0

  bool fitted() const { return shift.size() > 0; }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd invert(const Eigen::VectorXd& x) const;
};

Normalization fit_normalization(const std::vector<Eigen::VectorXd>& samples);

/// Gaussian-mixture sampler used to produce label-free pretraining data:
/// `num_anchors` anchor points drawn uniformly from the anchor box, samples
/// scattered around a uniformly chosen anchor with isotropic `spread`.
struct SamplerSpec {
  int num_anchors = 8;
  double anchor_low = -1.0;
  double anchor_high = 1.0;
  double spread = 1.0;
};

std::vector<Eigen::VectorXd> generate_pretraining_samples(
    int count, int dim, const SamplerSpec& spec, std::uint64_t seed);

struct Autoencoder {
  net::DenseNet encoder;  // n -> m
  net::DenseNet decoder;  // m -> n
  Normalization norm;
  int input_dim = 0;
  int latent_dim = 0;
};

/// Encoder n -> hidden... -> m and mirrored decoder, tanh hidden layers,
/// linear outputs. Requires m < n.
Autoencoder make_autoencoder(int input_dim, int latent_dim,
                             const std::vector<int>& hidden_dims,
                             std::uint64_t seed);

struct AeTrainOptions {
  int epochs = 20;
  int batch_size = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  long max_steps = 0;       // 0 = no cap on minibatch updates
  double stop_at_loss = -1; // negative = no early stop
};

struct AeTrainResult {
  std::vector<double> epoch_loss;  // per-coordinate MSE in normalised units
  long steps = 0;
};

/// Minimises mean reconstruction error with minibatch Adam. Fits the input
/// normalisation from `samples` on the first effective call; epochs == 0
/// leaves the autoencoder untouched. Throws net::TrainingDivergence (with the
/// epoch index) if the loss goes non-finite.
AeTrainResult train_autoencoder(Autoencoder& ae,
                                const std::vector<Eigen::VectorXd>& samples,
                                const AeTrainOptions& options);

/// Deterministic m-dimensional code of x: standardise, then run the encoder.
Eigen::VectorXd encode(const Autoencoder& ae, const Eigen::VectorXd& x);

/// Mean per-coordinate squared reconstruction error in the original units.
/// Test/diagnostic path; the search itself never decodes.
double reconstruction_mse(const Autoencoder& ae,
                          const std::vector<Eigen::VectorXd>& samples);

}  // namespace hyperncs::embed
