#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "hyperncs/dense_net.hpp"
#include "hyperncs/hyperbolic.hpp"

namespace hyperncs::surrogate {

/// +1 where fitness >= batch mean, -1 otherwise (fitness is maximised).
std::vector<int> label_batch(const std::vector<double>& fitnesses);

struct LabeledSample {
  Eigen::VectorXd latent;
  double fitness = 0.0;
  int label = 0;  // +1 promising, -1 unpromising
};

/// Two-class classifier wrapped in the ball: the latent code is lifted onto
/// the Poincare ball, mapped back to the tangent space at the origin, and fed
/// to a Euclidean core whose two logits go through softmax. The exp/log pair
/// on the output side cancels exactly at the origin and is therefore not
/// materialised. curvature == 0 gives the plain Euclidean classifier.
struct HnnModel {
  double curvature = 1.0;
  net::DenseNet core;  // m -> ... -> 2

  int latent_dim() const { return core.input_dim(); }
};

HnnModel make_hnn_model(int latent_dim, const std::vector<int>& hidden_dims,
                        double curvature, std::uint64_t seed);

/// Class probabilities (unpromising, promising); sums to 1.
Eigen::Vector2d hnn_forward(const HnnModel& model, const Eigen::VectorXd& z);

/// Riemannian gradient rescaling for a parameter living on the ball:
/// grad * ((1 - c|p|^2)^2 / 4). The default model keeps all parameters
/// Euclidean, so training below reduces to plain SGD; the hook is exposed for
/// ball-resident parameters.
Eigen::VectorXd riemannian_rescale(const Eigen::VectorXd& grad,
                                   const Eigen::VectorXd& point,
                                   double curvature);

struct TrainMetrics {
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
  double final_loss = 0.0;
  int train_count = 0;
  int val_count = 0;
  int test_count = 0;
};

struct HnnTrainOptions {
  int epochs = 5;
  double learning_rate = 1e-2;
  std::uint64_t seed = 0;
};

/// Continues training from the current parameters (never reinitialises) on a
/// seeded 6:2:2 train/val/test split of `samples`, minimising cross-entropy
/// with per-sample SGD. epochs == 0 evaluates the split without touching the
/// model. Accuracy over an empty split is reported as 0 with a zero count.
TrainMetrics train_incremental(HnnModel& model,
                               const std::vector<LabeledSample>& samples,
                               const HnnTrainOptions& options);

struct SurrogateScore {
  int candidate_index = 0;
  double promising_probability = 0.0;
};

struct PreselectResult {
  int best_index = 0;
  std::vector<SurrogateScore> scores;
};

/// Scores every candidate and returns the argmax of the promising-class
/// probability; ties break toward the lowest index.
PreselectResult preselect(const HnnModel& model,
                          const std::vector<Eigen::VectorXd>& candidates);

/// Argmax with lowest-index tie break over raw scores.
int preselect_index(const std::vector<double>& scores);

/// FIFO buffer of the most recent labeled samples seen by the surrogate.
class SampleBuffer {
 public:
  explicit SampleBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(LabeledSample s);
  std::size_t size() const { return samples_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::vector<LabeledSample> snapshot() const;

 private:
  std::size_t capacity_;
  std::deque<LabeledSample> samples_;
};

/// Engine-facing pre-selection strategy. One instance per run; scoring a
/// given batch is const-safe, absorb/train happen in the coordinator phase.
class Surrogate {
 public:
  virtual ~Surrogate() = default;
  /// Higher score = more promising. Aligned with the candidate order.
  virtual std::vector<double> score(
      const std::vector<Eigen::VectorXd>& originals,
      const std::vector<Eigen::VectorXd>& latents) = 0;
  virtual void absorb(const std::vector<Eigen::VectorXd>& latents,
                      const std::vector<double>& fitnesses) = 0;
  virtual std::optional<TrainMetrics> train_generation(std::uint64_t seed) = 0;
};

class HnnSurrogate : public Surrogate {
 public:
  HnnSurrogate(HnnModel model, std::size_t buffer_capacity,
               HnnTrainOptions train_options)
      : model_(std::move(model)),
        buffer_(buffer_capacity),
        train_options_(train_options) {}

  std::vector<double> score(const std::vector<Eigen::VectorXd>& originals,
                            const std::vector<Eigen::VectorXd>& latents) override;
  void absorb(const std::vector<Eigen::VectorXd>& latents,
              const std::vector<double>& fitnesses) override;
  std::optional<TrainMetrics> train_generation(std::uint64_t seed) override;

  const HnnModel& model() const { return model_; }
  const SampleBuffer& buffer() const { return buffer_; }

 private:
  HnnModel model_;
  SampleBuffer buffer_;
  HnnTrainOptions train_options_;
};

/// No pre-selection: uniform scores, so the tie-break always picks index 0
/// and the run degenerates to the plain search baseline.
class NoneSurrogate : public Surrogate {
 public:
  std::vector<double> score(const std::vector<Eigen::VectorXd>& originals,
                            const std::vector<Eigen::VectorXd>& latents) override;
  void absorb(const std::vector<Eigen::VectorXd>&,
              const std::vector<double>&) override {}
  std::optional<TrainMetrics> train_generation(std::uint64_t) override {
    return std::nullopt;
  }
};

/// Diagnostic control: scores are the true fitness values, evaluated through
/// a caller-supplied function that must not be charged to the search budget.
class OracleSurrogate : public Surrogate {
 public:
  explicit OracleSurrogate(
      std::function<double(const Eigen::VectorXd&)> evaluate)
      : evaluate_(std::move(evaluate)) {}

  std::vector<double> score(const std::vector<Eigen::VectorXd>& originals,
                            const std::vector<Eigen::VectorXd>& latents) override;
  void absorb(const std::vector<Eigen::VectorXd>&,
              const std::vector<double>&) override {}
  std::optional<TrainMetrics> train_generation(std::uint64_t) override {
    return std::nullopt;
  }

 private:
  std::function<double(const Eigen::VectorXd&)> evaluate_;
};

}  // namespace hyperncs::surrogate
