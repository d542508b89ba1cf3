#include "hyperncs/embedding.hpp"

#include <random>
#include <stdexcept>

namespace hyperncs::embed {

AutoencoderEmbedding::AutoencoderEmbedding(const Autoencoder& trained)
    : encoder_(trained.encoder), norm_(trained.norm) {}

Eigen::VectorXd AutoencoderEmbedding::encode(const Eigen::VectorXd& x) const {
  if (x.size() != encoder_.input_dim()) {
    throw std::invalid_argument("AutoencoderEmbedding: dimension mismatch");
  }
  return net::forward(encoder_, norm_.fitted() ? norm_.apply(x) : x);
}

RandomProjectionEmbedding::RandomProjectionEmbedding(
    int input_dim, int latent_dim, std::uint64_t seed,
    const Eigen::VectorXd& low, const Eigen::VectorXd& high) {
  if (latent_dim < 1 || latent_dim >= input_dim) {
    throw std::invalid_argument("RandomProjectionEmbedding: need 0 < m < n");
  }
  if (low.size() != input_dim || high.size() != input_dim) {
    throw std::invalid_argument("RandomProjectionEmbedding: bad bounds");
  }
  mid_ = 0.5 * (low + high);
  half_range_ = (0.5 * (high - low)).cwiseMax(1e-12);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(input_dim));
  matrix_.resize(latent_dim, input_dim);
  for (int r = 0; r < latent_dim; ++r) {
    for (int c = 0; c < input_dim; ++c) {
      matrix_(r, c) = scale * gauss(rng);
    }
  }
}

Eigen::VectorXd RandomProjectionEmbedding::encode(
    const Eigen::VectorXd& x) const {
  if (x.size() != matrix_.cols()) {
    throw std::invalid_argument("RandomProjectionEmbedding: dimension mismatch");
  }
  return matrix_ * (x - mid_).cwiseQuotient(half_range_);
}

Eigen::VectorXd IdentityEmbedding::encode(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("IdentityEmbedding: dimension mismatch");
  }
  return x;
}

}  // namespace hyperncs::embed
