#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hyperncs/embedding.hpp"
#include "hyperncs/problems.hpp"
#include "hyperncs/surrogate.hpp"

namespace hyperncs::search {

/// Derives independent, reproducible sub-seeds from a master seed so that
/// per-subpopulation streams never depend on execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);

/// One subpopulation's isotropic Gaussian search distribution plus its
/// 1/5-rule success window.
struct SearchDistribution {
  Eigen::VectorXd mean;
  double sigma = 1.0;
  int success_count = 0;
  int trial_count = 0;
};

/// Candidates of one subpopulation in both spaces. index_map sends a latent
/// index to the original it was encoded from, so the pre-selected candidate
/// is retrieved bit-identically, never reconstructed.
struct CandidateBatch {
  std::vector<Eigen::VectorXd> originals;
  std::vector<Eigen::VectorXd> latents;
  std::vector<int> index_map;
};

/// Means drawn uniformly inside [low, high]; sigma set to sigma_init.
/// Requires N >= 2 (diversity needs a peer) and low <= high per coordinate.
std::vector<SearchDistribution> init_distributions(
    int subpopulations, const Eigen::VectorXd& low, const Eigen::VectorXd& high,
    double sigma_init, std::uint64_t seed);

std::vector<Eigen::VectorXd> sample_candidates(const SearchDistribution& dist,
                                               int count, std::mt19937_64& rng);

/// Closed-form Bhattacharyya distance between two isotropic Gaussians.
double bhattacharyya_distance(const Eigen::VectorXd& mean_a, double sigma_a,
                              const Eigen::VectorXd& mean_b, double sigma_b);

/// Diversity of a (mean, sigma) against a population: the minimum
/// Bhattacharyya distance to any peer distribution other than exclude_index.
double min_bhattacharyya(const Eigen::VectorXd& mean, double sigma,
                         const std::vector<SearchDistribution>& all,
                         int exclude_index);

/// Strict f + phi*d comparison; equality never replaces the parent.
bool acceptance_test(double parent_fitness, double parent_diversity,
                     double child_fitness, double child_diversity, double phi);

/// 1/5 success rule over a completed window: more than 1/5 successes grows
/// sigma (divide by factor < 1), fewer shrinks it, exactly 1/5 leaves it.
/// Counters are reset. Requires trial_count == epoch_len.
void one_fifth_update(SearchDistribution& dist, int epoch_len, double factor);

struct SubpopulationRecord {
  int subpop = 0;
  int selected_index = 0;
  std::vector<double> scores;
  double selected_fitness = 0.0;
  bool accepted = false;
  double parent_fitness = 0.0;
  double parent_diversity = 0.0;
  double child_diversity = 0.0;
  double sigma_after = 0.0;
  Eigen::VectorXd selected_latent;  // empty when the run has no embedding
};

struct AuditEntry {
  int subpop = 0;
  int candidate_index = 0;
  double score = 0.0;
  double fitness = 0.0;  // true fitness from the audit channel
};

struct GenerationRecord {
  int generation = 0;
  long real_evals_used = 0;  // cumulative, main channel only
  double best_fitness = 0.0;
  std::string best_id;
  std::vector<SubpopulationRecord> subpops;
  std::optional<surrogate::TrainMetrics> surrogate_metrics;
  std::vector<AuditEntry> audit;
};

struct RunResult {
  Eigen::VectorXd best_vector;
  double best_fitness = 0.0;
  std::string best_id;
  long real_evals_used = 0;
  std::vector<double> init_fitnesses;
  std::vector<GenerationRecord> records;
  std::vector<double> generation_wall_ms;  // measurement only, not recorded
};

struct NcsOptions {
  int subpopulations = 5;       // N
  int candidates = 10;          // M per subpopulation per generation
  double phi = 1.0;
  double sigma_init = 1.0;
  int one_fifth_epoch_len = 10;
  double one_fifth_factor = 0.99;
  bool normalize_acceptance = false;  // per-generation min-max of f and d
  int audit_k = 0;                    // audited candidates per subpop, 0 = off
  std::uint64_t seed = 0;
};

/// Generation-synchronous search loop. Each generation samples M candidates
/// per subpopulation, encodes them, asks the surrogate for one pre-selected
/// candidate, spends exactly one real evaluation on it, and merges results in
/// subpopulation order. Audit evaluations go through a separate problem
/// instance and never touch the search state.
class NcsEngine {
 public:
  NcsEngine(std::shared_ptr<problems::FitnessProblem> problem,
            const embed::Embedding* embedding, surrogate::Surrogate& surrogate,
            NcsOptions options,
            std::shared_ptr<problems::FitnessProblem> audit_problem = nullptr);

  /// Draws and evaluates the N initial means (N real evaluations) and seeds
  /// the surrogate buffer with them. The surrogate itself stays untrained.
  void initialize();

  GenerationRecord run_generation();

  /// Runs floor(budget / N) generations after initialisation; budget counts
  /// post-init real evaluations.
  RunResult run(long budget);

  const std::vector<SearchDistribution>& distributions() const { return dists_; }
  double best_fitness() const { return best_fitness_; }
  const Eigen::VectorXd& best_vector() const { return best_vector_; }
  long real_evals_used() const { return problem_->eval_count(); }
  const std::vector<double>& init_fitnesses() const { return init_fitnesses_; }

 private:
  Eigen::VectorXd latent_of(const Eigen::VectorXd& x) const;

  std::shared_ptr<problems::FitnessProblem> problem_;
  const embed::Embedding* embedding_;
  surrogate::Surrogate& surrogate_;
  NcsOptions options_;
  std::shared_ptr<problems::FitnessProblem> audit_problem_;

  std::vector<SearchDistribution> dists_;
  std::vector<double> parent_fitness_;
  std::vector<std::mt19937_64> subpop_rngs_;
  std::vector<double> init_fitnesses_;
  int generation_ = 0;
  bool initialized_ = false;

  Eigen::VectorXd best_vector_;
  double best_fitness_ = 0.0;
  std::string best_id_;
};

}  // namespace hyperncs::search
