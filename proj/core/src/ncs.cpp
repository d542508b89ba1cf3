#include "hyperncs/ncs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace hyperncs::search {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  auto mix = [](std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  };
  return mix(mix(master) ^ tag);
}

namespace {
// stream tags for derive_seed
constexpr std::uint64_t kInitTag = 0x100;
constexpr std::uint64_t kSubpopTag = 0x10000;
constexpr std::uint64_t kTrainTag = 0x20000000;
}  // namespace

std::vector<SearchDistribution> init_distributions(
    int subpopulations, const Eigen::VectorXd& low, const Eigen::VectorXd& high,
    double sigma_init, std::uint64_t seed) {
  if (subpopulations < 2) {
    throw std::invalid_argument("init_distributions: need at least 2 subpopulations");
  }
  if (low.size() != high.size() || low.size() == 0 ||
      (low.array() > high.array()).any()) {
    throw std::invalid_argument("init_distributions: invalid bounds");
  }
  if (sigma_init <= 0.0) {
    throw std::invalid_argument("init_distributions: sigma_init must be > 0");
  }
  std::mt19937_64 rng(derive_seed(seed, kInitTag));
  std::vector<SearchDistribution> dists(subpopulations);
  for (auto& d : dists) {
    d.mean.resize(low.size());
    for (int k = 0; k < low.size(); ++k) {
      std::uniform_real_distribution<double> u(low[k], high[k]);
      d.mean[k] = u(rng);
    }
    d.sigma = sigma_init;
  }
  return dists;
}

std::vector<Eigen::VectorXd> sample_candidates(const SearchDistribution& dist,
                                               int count,
                                               std::mt19937_64& rng) {
  if (count < 1) {
    throw std::invalid_argument("sample_candidates: count must be >= 1");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    Eigen::VectorXd x = dist.mean;
    for (int k = 0; k < x.size(); ++k) x[k] += dist.sigma * gauss(rng);
    out.push_back(std::move(x));
  }
  return out;
}

double bhattacharyya_distance(const Eigen::VectorXd& mean_a, double sigma_a,
                              const Eigen::VectorXd& mean_b, double sigma_b) {
  if (mean_a.size() != mean_b.size()) {
    throw std::invalid_argument("bhattacharyya_distance: dimension mismatch");
  }
  const double var_bar = 0.5 * (sigma_a * sigma_a + sigma_b * sigma_b);
  const double quad = (mean_a - mean_b).squaredNorm() / (8.0 * var_bar);
  const double log_term =
      0.5 * static_cast<double>(mean_a.size()) *
      std::log(var_bar / (sigma_a * sigma_b));
  return quad + log_term;
}

double min_bhattacharyya(const Eigen::VectorXd& mean, double sigma,
                         const std::vector<SearchDistribution>& all,
                         int exclude_index) {
  if (all.size() < 2) {
    throw std::invalid_argument("min_bhattacharyya: need at least 2 distributions");
  }
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(all.size()); ++j) {
    if (j == exclude_index) continue;
    best = std::min(best, bhattacharyya_distance(mean, sigma, all[j].mean,
                                                 all[j].sigma));
  }
  return best;
}

bool acceptance_test(double parent_fitness, double parent_diversity,
                     double child_fitness, double child_diversity, double phi) {
  return child_fitness + phi * child_diversity >
         parent_fitness + phi * parent_diversity;
}

void one_fifth_update(SearchDistribution& dist, int epoch_len, double factor) {
  if (dist.trial_count != epoch_len) {
    throw std::invalid_argument("one_fifth_update: window not complete");
  }
  // integer comparison keeps the 1/5 boundary exact
  if (5 * dist.success_count > dist.trial_count) {
    dist.sigma /= factor;
  } else if (5 * dist.success_count < dist.trial_count) {
    dist.sigma *= factor;
  }
  dist.success_count = 0;
  dist.trial_count = 0;
}

NcsEngine::NcsEngine(std::shared_ptr<problems::FitnessProblem> problem,
                     const embed::Embedding* embedding,
                     surrogate::Surrogate& surrogate, NcsOptions options,
                     std::shared_ptr<problems::FitnessProblem> audit_problem)
    : problem_(std::move(problem)),
      embedding_(embedding),
      surrogate_(surrogate),
      options_(options),
      audit_problem_(std::move(audit_problem)) {
  if (!problem_) throw std::invalid_argument("NcsEngine: null problem");
  if (options_.subpopulations < 2) {
    throw std::invalid_argument("NcsEngine: need at least 2 subpopulations");
  }
  if (options_.candidates < 1) {
    throw std::invalid_argument("NcsEngine: need at least 1 candidate");
  }
  if (options_.audit_k > 0 && !audit_problem_) {
    throw std::invalid_argument("NcsEngine: audit_k set but no audit problem");
  }
  if (audit_problem_ && audit_problem_->dim() != problem_->dim()) {
    throw std::invalid_argument("NcsEngine: audit problem dimension mismatch");
  }
  if (embedding_ && embedding_->input_dim() != problem_->dim()) {
    throw std::invalid_argument("NcsEngine: embedding input dim mismatch");
  }
}

Eigen::VectorXd NcsEngine::latent_of(const Eigen::VectorXd& x) const {
  return embedding_ ? embedding_->encode(x) : x;
}

void NcsEngine::initialize() {
  if (initialized_) return;
  dists_ = init_distributions(options_.subpopulations, problem_->lower_bounds(),
                              problem_->upper_bounds(), options_.sigma_init,
                              options_.seed);
  subpop_rngs_.clear();
  for (int i = 0; i < options_.subpopulations; ++i) {
    subpop_rngs_.emplace_back(derive_seed(options_.seed, kSubpopTag + i));
  }
  parent_fitness_.clear();
  std::vector<Eigen::VectorXd> latents;
  best_fitness_ = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < options_.subpopulations; ++i) {
    const double f = problem_->evaluate(dists_[i].mean);
    parent_fitness_.push_back(f);
    init_fitnesses_.push_back(f);
    latents.push_back(latent_of(dists_[i].mean));
    if (f > best_fitness_) {
      best_fitness_ = f;
      best_vector_ = dists_[i].mean;
      best_id_ = "init:" + std::to_string(i);
    }
  }
  // evaluated starting points are worth remembering, but the surrogate itself
  // starts untrained: no train_generation call until generation 1 completes
  surrogate_.absorb(latents, parent_fitness_);
  initialized_ = true;
}

GenerationRecord NcsEngine::run_generation() {
  if (!initialized_) {
    throw std::logic_error("NcsEngine: run_generation before initialize");
  }
  ++generation_;
  const int n_sub = options_.subpopulations;
  const std::vector<SearchDistribution> snapshot = dists_;

  GenerationRecord record;
  record.generation = generation_;

  std::vector<Eigen::VectorXd> children(n_sub);
  std::vector<Eigen::VectorXd> child_latents(n_sub);
  std::vector<double> child_fitness(n_sub), parent_div(n_sub), child_div(n_sub);

  // per-subpopulation phase: no shared mutable state beyond the problem's
  // atomic counter, so the iterations could run on independent workers
  for (int i = 0; i < n_sub; ++i) {
    CandidateBatch batch;
    batch.originals = sample_candidates(snapshot[i], options_.candidates,
                                        subpop_rngs_[i]);
    batch.latents.reserve(batch.originals.size());
    batch.index_map.reserve(batch.originals.size());
    for (size_t j = 0; j < batch.originals.size(); ++j) {
      batch.latents.push_back(latent_of(batch.originals[j]));
      batch.index_map.push_back(static_cast<int>(j));
    }

    const std::vector<double> scores =
        surrogate_.score(batch.originals, batch.latents);
    const int sel = surrogate::preselect_index(scores);
    const Eigen::VectorXd& child = batch.originals[batch.index_map[sel]];

    double f_child;
    try {
      f_child = problem_->evaluate(child);
    } catch (const problems::BudgetExhausted&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error("fitness evaluation failed in subpopulation " +
                               std::to_string(i) + ": " + e.what());
    }

    children[i] = child;
    child_latents[i] = batch.latents[sel];
    child_fitness[i] = f_child;
    parent_div[i] = min_bhattacharyya(snapshot[i].mean, snapshot[i].sigma,
                                      snapshot, i);
    child_div[i] = min_bhattacharyya(child, snapshot[i].sigma, snapshot, i);

    SubpopulationRecord sr;
    sr.subpop = i;
    sr.selected_index = sel;
    sr.scores = scores;
    sr.selected_fitness = f_child;
    sr.parent_fitness = parent_fitness_[i];
    sr.parent_diversity = parent_div[i];
    sr.child_diversity = child_div[i];
    if (embedding_) sr.selected_latent = child_latents[i];
    record.subpops.push_back(std::move(sr));

    if (options_.audit_k > 0) {
      const int k = std::min<int>(options_.audit_k, options_.candidates);
      for (int j = 0; j < k; ++j) {
        AuditEntry entry;
        entry.subpop = i;
        entry.candidate_index = j;
        entry.score = scores[j];
        entry.fitness = audit_problem_->evaluate(batch.originals[j]);
        record.audit.push_back(entry);
      }
    }
  }

  // coordinator phase: acceptance in subpopulation order
  std::vector<double> f_parent_n(parent_fitness_), f_child_n(child_fitness);
  std::vector<double> d_parent_n(parent_div), d_child_n(child_div);
  if (options_.normalize_acceptance) {
    auto minmax = [](std::vector<double>& a, std::vector<double>& b) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (double v : a) { lo = std::min(lo, v); hi = std::max(hi, v); }
      for (double v : b) { lo = std::min(lo, v); hi = std::max(hi, v); }
      const double range = hi - lo;
      auto scale = [&](double v) { return range > 0.0 ? (v - lo) / range : 0.0; };
      for (double& v : a) v = scale(v);
      for (double& v : b) v = scale(v);
    };
    minmax(f_parent_n, f_child_n);
    minmax(d_parent_n, d_child_n);
  }

  std::vector<Eigen::VectorXd> absorbed_latents;
  std::vector<double> absorbed_fitness;
  for (int i = 0; i < n_sub; ++i) {
    const bool accepted =
        acceptance_test(f_parent_n[i], d_parent_n[i], f_child_n[i],
                        d_child_n[i], options_.phi);
    dists_[i].trial_count += 1;
    if (accepted) {
      dists_[i].success_count += 1;
      dists_[i].mean = children[i];
      parent_fitness_[i] = child_fitness[i];
    }
    record.subpops[i].accepted = accepted;

    if (child_fitness[i] > best_fitness_) {
      best_fitness_ = child_fitness[i];
      best_vector_ = children[i];
      best_id_ = "g" + std::to_string(generation_) + ":s" + std::to_string(i);
    }
    absorbed_latents.push_back(child_latents[i]);
    absorbed_fitness.push_back(child_fitness[i]);
  }

  surrogate_.absorb(absorbed_latents, absorbed_fitness);
  record.surrogate_metrics =
      surrogate_.train_generation(derive_seed(options_.seed, kTrainTag + generation_));

  for (int i = 0; i < n_sub; ++i) {
    if (dists_[i].trial_count == options_.one_fifth_epoch_len) {
      one_fifth_update(dists_[i], options_.one_fifth_epoch_len,
                       options_.one_fifth_factor);
    }
    record.subpops[i].sigma_after = dists_[i].sigma;
  }

  record.real_evals_used = problem_->eval_count();
  record.best_fitness = best_fitness_;
  record.best_id = best_id_;
  return record;
}

RunResult NcsEngine::run(long budget) {
  if (budget < 1) {
    throw std::invalid_argument("NcsEngine::run: budget must be >= 1");
  }
  initialize();
  RunResult result;
  const long generations = budget / options_.subpopulations;
  for (long g = 0; g < generations; ++g) {
    const auto start = std::chrono::steady_clock::now();
    result.records.push_back(run_generation());
    const auto stop = std::chrono::steady_clock::now();
    result.generation_wall_ms.push_back(
        std::chrono::duration<double, std::milli>(stop - start).count());
  }
  result.best_vector = best_vector_;
  result.best_fitness = best_fitness_;
  result.best_id = best_id_;
  result.real_evals_used = problem_->eval_count();
  result.init_fitnesses = init_fitnesses_;
  return result;
}

}  // namespace hyperncs::search
