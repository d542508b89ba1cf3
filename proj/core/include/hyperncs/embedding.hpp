#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>

#include "hyperncs/autoencoder.hpp"

namespace hyperncs::embed {

/// Maps an n-dimensional parameter vector to its m-dimensional latent code.
/// Implementations are immutable once constructed and safe to share across
/// workers.
class Embedding {
 public:
  virtual ~Embedding() = default;
  virtual int input_dim() const = 0;
  virtual int latent_dim() const = 0;
  virtual Eigen::VectorXd encode(const Eigen::VectorXd& x) const = 0;
};

/// Encoder half of a trained autoencoder. The decoder is deliberately not
/// carried along: nothing downstream of pretraining may decode.
class AutoencoderEmbedding : public Embedding {
 public:
  explicit AutoencoderEmbedding(const Autoencoder& trained);

  int input_dim() const override { return encoder_.input_dim(); }
  int latent_dim() const override { return encoder_.output_dim(); }
  Eigen::VectorXd encode(const Eigen::VectorXd& x) const override;

 private:
  net::DenseNet encoder_;
  Normalization norm_;
};

/// Fixed seeded Gaussian projection n -> m. Inputs are first rescaled to the
/// unit box implied by `low`/`high` so latent norms stay problem-independent.
class RandomProjectionEmbedding : public Embedding {
 public:
  RandomProjectionEmbedding(int input_dim, int latent_dim, std::uint64_t seed,
                            const Eigen::VectorXd& low,
                            const Eigen::VectorXd& high);

  int input_dim() const override { return static_cast<int>(matrix_.cols()); }
  int latent_dim() const override { return static_cast<int>(matrix_.rows()); }
  Eigen::VectorXd encode(const Eigen::VectorXd& x) const override;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd mid_;
  Eigen::VectorXd half_range_;
};

/// Latent code == parameter vector; used when the search runs directly on the
/// original coordinates (tiny problems, tests).
class IdentityEmbedding : public Embedding {
 public:
  explicit IdentityEmbedding(int dim) : dim_(dim) {}
  int input_dim() const override { return dim_; }
  int latent_dim() const override { return dim_; }
  Eigen::VectorXd encode(const Eigen::VectorXd& x) const override;

 private:
  int dim_;
};

}  // namespace hyperncs::embed
