#include "hyperncs/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hyperncs::surrogate {

std::vector<int> label_batch(const std::vector<double>& fitnesses) {
  if (fitnesses.empty()) {
    throw std::invalid_argument("label_batch: empty fitness list");
  }
  for (double f : fitnesses) {
    if (!std::isfinite(f)) {
      throw std::invalid_argument("label_batch: non-finite fitness");
    }
  }
  const double mean =
      std::accumulate(fitnesses.begin(), fitnesses.end(), 0.0) /
      static_cast<double>(fitnesses.size());
  std::vector<int> labels;
  labels.reserve(fitnesses.size());
  for (double f : fitnesses) labels.push_back(f >= mean ? 1 : -1);
  return labels;
}

HnnModel make_hnn_model(int latent_dim, const std::vector<int>& hidden_dims,
                        double curvature, std::uint64_t seed) {
  if (curvature < 0.0) {
    throw std::invalid_argument("make_hnn_model: curvature must be >= 0");
  }
  std::vector<int> dims;
  dims.push_back(latent_dim);
  dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
  dims.push_back(2);
  HnnModel model;
  model.curvature = curvature;
  model.core = net::make_dense_net(dims, net::Activation::kTanh, seed);
  return model;
}

namespace {

// Ball round trip of the input: identity for c == 0, a norm clamp at
// artanh(1 - kBallEps)/sqrt(c) otherwise.
Eigen::VectorXd lift_to_tangent(const Eigen::VectorXd& z, double curvature) {
  if (curvature == 0.0) return z;
  using namespace hyperncs::hyperbolic;
  BallPoint p = exp_map_zero(z, curvature);
  p = project_to_ball(std::move(p.coords), curvature);
  return log_map_zero(p);
}

}  // namespace

Eigen::Vector2d hnn_forward(const HnnModel& model, const Eigen::VectorXd& z) {
  if (z.size() != model.latent_dim()) {
    throw std::invalid_argument("hnn_forward: latent dimension mismatch");
  }
  const Eigen::VectorXd u = lift_to_tangent(z, model.curvature);
  return net::softmax(net::forward(model.core, u));
}

Eigen::VectorXd riemannian_rescale(const Eigen::VectorXd& grad,
                                   const Eigen::VectorXd& point,
                                   double curvature) {
  const double factor = 1.0 - curvature * point.squaredNorm();
  return grad * (factor * factor / 4.0);
}

TrainMetrics train_incremental(HnnModel& model,
                               const std::vector<LabeledSample>& samples,
                               const HnnTrainOptions& options) {
  if (samples.empty()) {
    throw std::invalid_argument("train_incremental: empty sample set");
  }
  for (const auto& s : samples) {
    if (s.latent.size() != model.latent_dim()) {
      throw std::invalid_argument("train_incremental: latent dimension mismatch");
    }
    if (s.label != 1 && s.label != -1) {
      throw std::invalid_argument("train_incremental: label must be +1 or -1");
    }
  }
  std::mt19937_64 rng(options.seed);
  std::vector<int> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  const int n = static_cast<int>(samples.size());
  const int n_train = std::max(1, (6 * n) / 10);
  const int n_val = std::min(n - n_train, (2 * n) / 10);
  std::vector<int> train_idx(order.begin(), order.begin() + n_train);
  std::vector<int> val_idx(order.begin() + n_train,
                           order.begin() + n_train + n_val);
  std::vector<int> test_idx(order.begin() + n_train + n_val, order.end());

  // Tangent-space inputs are fixed given the latent code; precompute once.
  std::vector<Eigen::VectorXd> inputs(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    inputs[i] = [&] {
      if (model.curvature == 0.0) return samples[i].latent;
      using namespace hyperncs::hyperbolic;
      BallPoint p = exp_map_zero(samples[i].latent, model.curvature);
      p = project_to_ball(std::move(p.coords), model.curvature);
      return log_map_zero(p);
    }();
  }

  net::ForwardCache cache;
  double last_loss = 0.0;
  long step = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(train_idx.begin(), train_idx.end(), rng);
    double loss_sum = 0.0;
    for (int idx : train_idx) {
      const Eigen::VectorXd logits = net::forward(model.core, inputs[idx], &cache);
      const Eigen::Vector2d probs = net::softmax(logits);
      const int cls = samples[idx].label == 1 ? 1 : 0;
      const double loss = -std::log(std::max(probs[cls], 1e-300));
      ++step;
      if (!std::isfinite(loss)) {
        throw net::TrainingDivergence(
            "train_incremental: non-finite loss at step " + std::to_string(step),
            step);
      }
      loss_sum += loss;
      Eigen::Vector2d dlogits = probs;
      dlogits[cls] -= 1.0;
      const net::Gradients grads = net::backward(model.core, cache, dlogits);
      net::sgd_step(model.core, grads, options.learning_rate);
    }
    last_loss = loss_sum / static_cast<double>(train_idx.size());
  }

  auto accuracy = [&](const std::vector<int>& idx) {
    if (idx.empty()) return 0.0;
    int correct = 0;
    for (int i : idx) {
      const Eigen::Vector2d probs = hnn_forward(model, samples[i].latent);
      const int predicted = probs[1] >= probs[0] ? 1 : -1;
      if (predicted == samples[i].label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(idx.size());
  };

  TrainMetrics metrics;
  metrics.train_accuracy = accuracy(train_idx);
  metrics.val_accuracy = accuracy(val_idx);
  metrics.test_accuracy = accuracy(test_idx);
  metrics.final_loss = last_loss;
  metrics.train_count = static_cast<int>(train_idx.size());
  metrics.val_count = static_cast<int>(val_idx.size());
  metrics.test_count = static_cast<int>(test_idx.size());
  return metrics;
}

int preselect_index(const std::vector<double>& scores) {
  if (scores.empty()) {
    throw std::invalid_argument("preselect_index: empty score list");
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(scores.size()); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

PreselectResult preselect(const HnnModel& model,
                          const std::vector<Eigen::VectorXd>& candidates) {
  if (candidates.empty()) {
    throw std::invalid_argument("preselect: empty candidate list");
  }
  PreselectResult result;
  std::vector<double> raw;
  raw.reserve(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    const double p = hnn_forward(model, candidates[i])[1];
    raw.push_back(p);
    result.scores.push_back({static_cast<int>(i), p});
  }
  result.best_index = preselect_index(raw);
  return result;
}

void SampleBuffer::push(LabeledSample s) {
  samples_.push_back(std::move(s));
  while (samples_.size() > capacity_) samples_.pop_front();
}

std::vector<LabeledSample> SampleBuffer::snapshot() const {
  return {samples_.begin(), samples_.end()};
}

std::vector<double> HnnSurrogate::score(
    const std::vector<Eigen::VectorXd>&,
    const std::vector<Eigen::VectorXd>& latents) {
  std::vector<double> out;
  out.reserve(latents.size());
  for (const auto& z : latents) out.push_back(hnn_forward(model_, z)[1]);
  return out;
}

void HnnSurrogate::absorb(const std::vector<Eigen::VectorXd>& latents,
                          const std::vector<double>& fitnesses) {
  if (latents.size() != fitnesses.size()) {
    throw std::invalid_argument("HnnSurrogate::absorb: size mismatch");
  }
  if (latents.empty()) return;
  const std::vector<int> labels = label_batch(fitnesses);
  for (size_t i = 0; i < latents.size(); ++i) {
    buffer_.push({latents[i], fitnesses[i], labels[i]});
  }
}

std::optional<TrainMetrics> HnnSurrogate::train_generation(std::uint64_t seed) {
  if (buffer_.size() == 0) return std::nullopt;
  HnnTrainOptions opts = train_options_;
  opts.seed = seed;
  return train_incremental(model_, buffer_.snapshot(), opts);
}

std::vector<double> NoneSurrogate::score(
    const std::vector<Eigen::VectorXd>& originals,
    const std::vector<Eigen::VectorXd>& latents) {
  const size_t count = latents.empty() ? originals.size() : latents.size();
  return std::vector<double>(count, 0.5);
}

std::vector<double> OracleSurrogate::score(
    const std::vector<Eigen::VectorXd>& originals,
    const std::vector<Eigen::VectorXd>&) {
  std::vector<double> out;
  out.reserve(originals.size());
  for (const auto& x : originals) out.push_back(evaluate_(x));
  return out;
}

}  // namespace hyperncs::surrogate
