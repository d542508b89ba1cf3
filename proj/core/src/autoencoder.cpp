#include "hyperncs/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hyperncs::embed {

Eigen::VectorXd Normalization::apply(const Eigen::VectorXd& x) const {
  return (x - shift).cwiseQuotient(scale);
}

Eigen::VectorXd Normalization::invert(const Eigen::VectorXd& x) const {
  return x.cwiseProduct(scale) + shift;
}

Normalization fit_normalization(const std::vector<Eigen::VectorXd>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("fit_normalization: empty sample set");
  }
  const int dim = static_cast<int>(samples.front().size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
  for (const auto& s : samples) var += (s - mean).array().square().matrix();
  var /= static_cast<double>(samples.size());
  Normalization norm;
  norm.shift = mean;
  norm.scale = var.array().sqrt().max(1e-12).matrix();
  // constant coordinates get unit scale so the transform stays invertible
  for (int i = 0; i < dim; ++i) {
    if (var[i] <= 0.0) norm.scale[i] = 1.0;
  }
  return norm;
}

std::vector<Eigen::VectorXd> generate_pretraining_samples(
    int count, int dim, const SamplerSpec& spec, std::uint64_t seed) {
  if (count < 1) {
    throw std::invalid_argument("generate_pretraining_samples: count < 1");
  }
  if (dim < 1 || spec.num_anchors < 1 || spec.anchor_low > spec.anchor_high ||
      spec.spread < 0.0) {
    throw std::invalid_argument("generate_pretraining_samples: bad sampler spec");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> anchor_dist(spec.anchor_low,
                                                     spec.anchor_high);
  std::vector<Eigen::VectorXd> anchors(spec.num_anchors);
  for (auto& a : anchors) {
    a = Eigen::VectorXd::NullaryExpr(dim, [&](auto) { return anchor_dist(rng); });
  }
  std::uniform_int_distribution<int> pick(0, spec.num_anchors - 1);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Eigen::VectorXd> samples;
  samples.reserve(count);
  for (int i = 0; i < count; ++i) {
    const Eigen::VectorXd& a = anchors[pick(rng)];
    Eigen::VectorXd s = a;
    if (spec.spread > 0.0) {
      for (int k = 0; k < dim; ++k) s[k] += spec.spread * noise(rng);
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

Autoencoder make_autoencoder(int input_dim, int latent_dim,
                             const std::vector<int>& hidden_dims,
                             std::uint64_t seed) {
  if (latent_dim >= input_dim || latent_dim < 1) {
    throw std::invalid_argument(
        "make_autoencoder: latent_dim must satisfy 0 < m < n");
  }
  std::vector<int> enc_dims;
  enc_dims.push_back(input_dim);
  enc_dims.insert(enc_dims.end(), hidden_dims.begin(), hidden_dims.end());
  enc_dims.push_back(latent_dim);
  std::vector<int> dec_dims(enc_dims.rbegin(), enc_dims.rend());
  Autoencoder ae;
  ae.encoder = net::make_dense_net(enc_dims, net::Activation::kTanh, seed);
  ae.decoder = net::make_dense_net(dec_dims, net::Activation::kTanh, seed + 1);
  ae.input_dim = input_dim;
  ae.latent_dim = latent_dim;
  return ae;
}

AeTrainResult train_autoencoder(Autoencoder& ae,
                                const std::vector<Eigen::VectorXd>& samples,
                                const AeTrainOptions& options) {
  AeTrainResult result;
  if (options.epochs == 0) return result;
  if (samples.empty()) {
    throw std::invalid_argument("train_autoencoder: empty dataset");
  }
  for (const auto& s : samples) {
    if (s.size() != ae.input_dim) {
      throw std::invalid_argument("train_autoencoder: sample dimension mismatch");
    }
  }
  if (!ae.norm.fitted()) {
    ae.norm = fit_normalization(samples);
  }
  std::vector<Eigen::VectorXd> data;
  data.reserve(samples.size());
  for (const auto& s : samples) data.push_back(ae.norm.apply(s));

  const int n = ae.input_dim;
  const int batch_size = std::max(1, options.batch_size);
  auto enc_state = net::make_adam_state(ae.encoder, options.learning_rate);
  auto dec_state = net::make_adam_state(ae.decoder, options.learning_rate);

  std::mt19937_64 rng(options.seed);
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  net::ForwardCache enc_cache, dec_cache;
  net::Gradients enc_batch, dec_batch;
  bool step_capped = false;
  for (int epoch = 0; epoch < options.epochs && !step_capped; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_sum = 0.0;
    long seen = 0;
    for (size_t start = 0; start < order.size(); start += batch_size) {
      const size_t end = std::min(order.size(), start + batch_size);
      enc_batch.setZero(ae.encoder);
      dec_batch.setZero(ae.decoder);
      for (size_t idx = start; idx < end; ++idx) {
        const Eigen::VectorXd& x = data[order[idx]];
        const Eigen::VectorXd z = net::forward(ae.encoder, x, &enc_cache);
        const Eigen::VectorXd xr = net::forward(ae.decoder, z, &dec_cache);
        const Eigen::VectorXd err = xr - x;
        epoch_sum += err.squaredNorm() / n;
        ++seen;
        const Eigen::VectorXd dloss = (2.0 / n) * err;
        const Eigen::VectorXd dz =
            net::backward_accumulate(ae.decoder, dec_cache, dloss, dec_batch);
        net::backward_accumulate(ae.encoder, enc_cache, dz, enc_batch);
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      enc_batch.scale(inv);
      dec_batch.scale(inv);
      net::adam_step(ae.encoder, enc_batch, enc_state);
      net::adam_step(ae.decoder, dec_batch, dec_state);
      ++result.steps;
      if (options.max_steps > 0 && result.steps >= options.max_steps) {
        step_capped = true;
        break;
      }
    }
    const double epoch_loss = epoch_sum / static_cast<double>(seen);
    if (!std::isfinite(epoch_loss)) {
      throw net::TrainingDivergence(
          "train_autoencoder: non-finite loss at epoch " +
              std::to_string(epoch),
          epoch);
    }
    result.epoch_loss.push_back(epoch_loss);
    if (options.stop_at_loss >= 0.0 && epoch_loss < options.stop_at_loss) break;
  }
  return result;
}

Eigen::VectorXd encode(const Autoencoder& ae, const Eigen::VectorXd& x) {
  if (x.size() != ae.input_dim) {
    throw std::invalid_argument("encode: dimension mismatch");
  }
  const Eigen::VectorXd xn = ae.norm.fitted() ? ae.norm.apply(x) : x;
  return net::forward(ae.encoder, xn);
}

double reconstruction_mse(const Autoencoder& ae,
                          const std::vector<Eigen::VectorXd>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("reconstruction_mse: empty sample set");
  }
  double sum = 0.0;
  for (const auto& x : samples) {
    const Eigen::VectorXd xn = ae.norm.fitted() ? ae.norm.apply(x) : x;
    const Eigen::VectorXd xr = net::forward(ae.decoder, net::forward(ae.encoder, xn));
    const Eigen::VectorXd back = ae.norm.fitted() ? ae.norm.invert(xr) : xr;
    sum += (back - x).squaredNorm() / ae.input_dim;
  }
  return sum / static_cast<double>(samples.size());
}

}  // namespace hyperncs::embed
