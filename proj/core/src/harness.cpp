#include "hyperncs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include <json.hpp>

#include "hyperncs/checkpoint.hpp"
#include "hyperncs/rank_stats.hpp"

namespace hyperncs::harness {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {
// harness-level seed stream tags (engine uses its own, disjoint set)
constexpr std::uint64_t kAeDataTag = 0x200;
constexpr std::uint64_t kAeInitTag = 0x201;
constexpr std::uint64_t kAeTrainTag = 0x202;
constexpr std::uint64_t kRpTag = 0x210;
constexpr std::uint64_t kHnnInitTag = 0x220;
}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

embed::Autoencoder build_autoencoder(const RunConfig& cfg, std::uint64_t seed,
                                     const problems::FitnessProblem& problem) {
  const int n = problem.dim();
  if (!cfg.ae.checkpoint.empty()) {
    embed::Autoencoder ae = checkpoint::autoencoder_from_json(
        checkpoint::read_file(cfg.ae.checkpoint));
    if (ae.input_dim != n || ae.latent_dim != cfg.latent_dim) {
      throw std::runtime_error(
          "autoencoder checkpoint dims do not match the configured problem");
    }
    return ae;
  }
  const Eigen::VectorXd low = problem.lower_bounds();
  const Eigen::VectorXd high = problem.upper_bounds();
  embed::SamplerSpec sampler;
  sampler.num_anchors = cfg.ae.anchors;
  sampler.anchor_low = low.minCoeff();
  sampler.anchor_high = high.maxCoeff();
  sampler.spread = cfg.ae.anchor_spread;
  std::vector<Eigen::VectorXd> samples = embed::generate_pretraining_samples(
      cfg.ae.samples, n, sampler, search::derive_seed(seed, kAeDataTag));
  if (cfg.ae.harvest_init) {
    // the engine will draw the exact same means from the same master seed
    const auto dists = search::init_distributions(
        cfg.subpopulations, low, high, cfg.sigma_init, seed);
    for (const auto& d : dists) samples.push_back(d.mean);
  }
  embed::Autoencoder ae =
      embed::make_autoencoder(n, cfg.latent_dim, cfg.ae.hidden,
                              search::derive_seed(seed, kAeInitTag));
  embed::AeTrainOptions train;
  train.epochs = cfg.ae.epochs;
  train.batch_size = cfg.ae.batch_size;
  train.learning_rate = cfg.ae.learning_rate;
  train.seed = search::derive_seed(seed, kAeTrainTag);
  embed::train_autoencoder(ae, samples, train);
  return ae;
}

struct RunSetup {
  std::shared_ptr<problems::FitnessProblem> problem;
  std::unique_ptr<embed::Embedding> embedding;
  std::unique_ptr<surrogate::Surrogate> surro;
  std::shared_ptr<problems::FitnessProblem> audit_problem;
  std::shared_ptr<problems::FitnessProblem> oracle_problem;
  std::optional<embed::Autoencoder> trained_ae;
  surrogate::HnnSurrogate* hnn = nullptr;  // non-owning view when kind is hnn
};

RunSetup build_setup(const RunConfig& cfg, std::uint64_t seed) {
  RunSetup s;
  s.problem = problems::make_problem(cfg.problem);
  const int n = s.problem->dim();

  if (cfg.embedding == "ae") {
    s.trained_ae = build_autoencoder(cfg, seed, *s.problem);
    s.embedding = std::make_unique<embed::AutoencoderEmbedding>(*s.trained_ae);
  } else if (cfg.embedding == "random_projection") {
    s.embedding = std::make_unique<embed::RandomProjectionEmbedding>(
        n, cfg.latent_dim, search::derive_seed(seed, kRpTag),
        s.problem->lower_bounds(), s.problem->upper_bounds());
  }

  const int latent_dim = s.embedding ? s.embedding->latent_dim() : n;
  if (cfg.surrogate == "hnn" || cfg.surrogate == "euclidean") {
    const double curvature = cfg.surrogate == "hnn" ? cfg.curvature : 0.0;
    surrogate::HnnTrainOptions train;
    train.epochs = cfg.surrogate_epochs;
    train.learning_rate = cfg.surrogate_learning_rate;
    auto hnn = std::make_unique<surrogate::HnnSurrogate>(
        surrogate::make_hnn_model(latent_dim, cfg.surrogate_hidden, curvature,
                                  search::derive_seed(seed, kHnnInitTag)),
        static_cast<std::size_t>(cfg.buffer_generations) * cfg.subpopulations,
        train);
    s.hnn = hnn.get();
    s.surro = std::move(hnn);
  } else if (cfg.surrogate == "oracle") {
    s.oracle_problem = problems::make_problem(cfg.problem);
    auto oracle = s.oracle_problem;
    s.surro = std::make_unique<surrogate::OracleSurrogate>(
        [oracle](const Eigen::VectorXd& x) { return oracle->evaluate(x); });
  } else {
    s.surro = std::make_unique<surrogate::NoneSurrogate>();
  }

  if (cfg.audit) {
    s.audit_problem = problems::make_problem(cfg.problem);
  }
  return s;
}

void write_run_outputs(const RunConfig& cfg, std::uint64_t seed,
                       const fs::path& out_dir, const RunSetup& setup,
                       const search::RunResult& result) {
  RunConfig echo = cfg;
  echo.seeds = {seed};

  auto records = open_out(out_dir / "records.jsonl");
  records << record::header_line(run_config_to_json(echo),
                                 result.init_fitnesses,
                                 cfg.subpopulations)
          << "\n";
  for (const auto& r : result.records) {
    records << record::generation_line(r) << "\n";
  }
  records.close();

  auto timings = open_out(out_dir / "timings.csv");
  timings << "generation,wall_ms\n";
  for (size_t g = 0; g < result.generation_wall_ms.size(); ++g) {
    timings << (g + 1) << "," << format_double(result.generation_wall_ms[g])
            << "\n";
  }
  timings.close();

  if (setup.trained_ae) {
    checkpoint::write_file((out_dir / "ae.json").string(),
                           checkpoint::autoencoder_to_json(*setup.trained_ae));
  }
  if (setup.hnn) {
    checkpoint::write_file((out_dir / "hnn.json").string(),
                           checkpoint::hnn_to_json(setup.hnn->model()));
  }

  ordered_json summary;
  summary["best_fitness"] = result.best_fitness;
  summary["best_id"] = result.best_id;
  summary["real_evals_used"] = result.real_evals_used;
  summary["generations"] = result.records.size();
  checkpoint::write_file((out_dir / "summary.json").string(),
                         summary.dump(2) + "\n");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

search::RunResult execute_run(const RunConfig& cfg, std::uint64_t seed,
                              const fs::path& out_dir) {
  validate(cfg);
  fs::create_directories(out_dir);
  RunSetup setup = build_setup(cfg, seed);

  search::NcsOptions opts;
  opts.subpopulations = cfg.subpopulations;
  opts.candidates = cfg.candidates;
  opts.phi = cfg.phi;
  opts.sigma_init = cfg.sigma_init;
  opts.one_fifth_epoch_len = cfg.one_fifth_epoch_len;
  opts.one_fifth_factor = cfg.one_fifth_factor;
  opts.normalize_acceptance = cfg.normalize_acceptance;
  opts.audit_k = cfg.audit ? std::min(cfg.audit_k, cfg.candidates) : 0;
  opts.seed = seed;

  search::NcsEngine engine(setup.problem, setup.embedding.get(), *setup.surro,
                           opts, setup.audit_problem);
  search::RunResult result = engine.run(cfg.budget);
  write_run_outputs(cfg, seed, out_dir, setup, result);
  return result;
}

std::vector<search::RunResult> execute_all(const RunConfig& cfg,
                                           const fs::path& out_dir, int jobs) {
  validate(cfg);
  fs::create_directories(out_dir);
  std::vector<search::RunResult> results(cfg.seeds.size());
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cfg.seeds.size()) return;
      try {
        results[i] = execute_run(cfg, cfg.seeds[i],
                                 out_dir / ("rep_" + std::to_string(cfg.seeds[i])));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  const int n_jobs = std::max(1, std::min<int>(jobs, cfg.seeds.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::vector<double> finals;
  ordered_json per_seed = ordered_json::array();
  for (size_t i = 0; i < results.size(); ++i) {
    finals.push_back(results[i].best_fitness);
    per_seed.push_back({{"seed", cfg.seeds[i]},
                        {"best_fitness", results[i].best_fitness},
                        {"real_evals_used", results[i].real_evals_used}});
  }
  const double mean = mean_of(finals);
  ordered_json summary;
  summary["repetitions"] = cfg.seeds.size();
  summary["mean_best_fitness"] = mean;
  summary["stddev_best_fitness"] = stddev_of(finals, mean);
  summary["per_seed"] = std::move(per_seed);
  checkpoint::write_file((out_dir / "summary.json").string(),
                         summary.dump(2) + "\n");
  return results;
}

void pretrain_autoencoder(const RunConfig& cfg, std::uint64_t seed,
                          const fs::path& out_dir) {
  validate(cfg);
  if (cfg.embedding != "ae") {
    throw ConfigError({"embedding.kind: pretrain-ae requires kind 'ae'"});
  }
  fs::create_directories(out_dir);
  auto problem = problems::make_problem(cfg.problem);

  RunConfig local = cfg;
  local.ae.checkpoint.clear();  // always train fresh here
  const int n = problem->dim();
  const Eigen::VectorXd low = problem->lower_bounds();
  const Eigen::VectorXd high = problem->upper_bounds();
  embed::SamplerSpec sampler;
  sampler.num_anchors = local.ae.anchors;
  sampler.anchor_low = low.minCoeff();
  sampler.anchor_high = high.maxCoeff();
  sampler.spread = local.ae.anchor_spread;
  std::vector<Eigen::VectorXd> samples = embed::generate_pretraining_samples(
      local.ae.samples, n, sampler, search::derive_seed(seed, kAeDataTag));
  if (local.ae.harvest_init) {
    const auto dists = search::init_distributions(
        local.subpopulations, low, high, local.sigma_init, seed);
    for (const auto& d : dists) samples.push_back(d.mean);
  }
  embed::Autoencoder ae =
      embed::make_autoencoder(n, local.latent_dim, local.ae.hidden,
                              search::derive_seed(seed, kAeInitTag));
  embed::AeTrainOptions train;
  train.epochs = local.ae.epochs;
  train.batch_size = local.ae.batch_size;
  train.learning_rate = local.ae.learning_rate;
  train.seed = search::derive_seed(seed, kAeTrainTag);
  const embed::AeTrainResult history = embed::train_autoencoder(ae, samples, train);

  checkpoint::write_file((out_dir / "ae.json").string(),
                         checkpoint::autoencoder_to_json(ae));
  auto loss = open_out(out_dir / "loss_history.csv");
  loss << "epoch,loss\n";
  for (size_t e = 0; e < history.epoch_loss.size(); ++e) {
    loss << (e + 1) << "," << format_double(history.epoch_loss[e]) << "\n";
  }
}

std::vector<SweepCell> enumerate_cells(const SweepAxes& axes) {
  std::vector<SweepCell> cells;
  auto seen = [&](const std::string& label) {
    return std::any_of(cells.begin(), cells.end(),
                       [&](const SweepCell& c) { return c.label == label; });
  };
  for (const auto& s : axes.surrogate) {
    if (s == "none") {
      if (!seen("none")) cells.push_back({"none", "none", "none", 0.0});
      continue;
    }
    for (const auto& e : axes.embedding) {
      const std::string e_short = e == "random_projection" ? "rp" : e;
      if (s == "euclidean") {
        const std::string label = e_short + "+euclidean";
        if (!seen(label)) cells.push_back({label, e, s, 0.0});
      } else {
        for (double c : axes.curvature) {
          const std::string label = e_short + "+hnn(c=" + format_double(c) + ")";
          if (!seen(label)) cells.push_back({label, e, s, c});
        }
      }
    }
  }
  return cells;
}

namespace {

std::string dir_safe(const std::string& label) {
  std::string out;
  for (char ch : label) {
    out += (std::isalnum(static_cast<unsigned char>(ch)) != 0) ? ch : '_';
  }
  return out;
}

}  // namespace

std::vector<SweepCellResult> run_sweep(const SweepConfig& cfg,
                                       const fs::path& out_dir, int jobs) {
  validate(cfg);
  const std::vector<SweepCell> cells = enumerate_cells(cfg.axes);
  const auto& seeds = cfg.base.seeds;
  fs::create_directories(out_dir);

  struct Task {
    size_t cell;
    size_t rep;
  };
  std::vector<Task> tasks;
  for (size_t c = 0; c < cells.size(); ++c) {
    for (size_t r = 0; r < seeds.size(); ++r) tasks.push_back({c, r});
  }
  std::vector<SweepCellResult> results(cells.size());
  for (size_t c = 0; c < cells.size(); ++c) {
    results[c].cell = cells[c];
    results[c].final_best.resize(seeds.size());
  }

  auto cell_config = [&](const SweepCell& cell) {
    RunConfig run = cfg.base;
    run.embedding = cell.embedding;
    run.surrogate = cell.surrogate;
    run.curvature = cell.curvature;
    return run;
  };
  // every cell config must be valid before anything runs
  for (const auto& cell : cells) validate(cell_config(cell));

  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      try {
        const RunConfig run = cell_config(cells[task.cell]);
        const fs::path dir = out_dir / "cells" / dir_safe(cells[task.cell].label) /
                             ("rep_" + std::to_string(seeds[task.rep]));
        const auto result = execute_run(run, seeds[task.rep], dir);
        results[task.cell].final_best[task.rep] = result.best_fitness;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  const int n_jobs = std::max(1, std::min<int>(jobs, tasks.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  auto csv = open_out(out_dir / "sweep_summary.csv");
  csv << "cell,seed,final_best\n";
  for (auto& cell : results) {
    for (size_t r = 0; r < seeds.size(); ++r) {
      csv << cell.cell.label << "," << seeds[r] << ","
          << format_double(cell.final_best[r]) << "\n";
    }
    cell.mean = mean_of(cell.final_best);
    cell.stddev = stddev_of(cell.final_best, cell.mean);
  }
  csv << "\ncell,mean,stddev,repetitions\n";
  for (const auto& cell : results) {
    csv << cell.cell.label << "," << format_double(cell.mean) << ","
        << format_double(cell.stddev) << "," << seeds.size() << "\n";
  }
  return results;
}

RankConsistencyReport rank_consistency(
    const std::vector<search::GenerationRecord>& records, int warmup) {
  const bool any_audit =
      std::any_of(records.begin(), records.end(),
                  [](const auto& r) { return !r.audit.empty(); });
  if (!any_audit) {
    throw std::invalid_argument("rank_consistency: run has no audit data");
  }
  RankConsistencyReport report;
  report.warmup = warmup;
  std::vector<double> rhos, taus;
  for (const auto& r : records) {
    RankGeneration g;
    g.generation = r.generation;
    std::vector<double> scores, fitness;
    for (const auto& a : r.audit) {
      scores.push_back(a.score);
      fitness.push_back(a.fitness);
    }
    g.pairs = static_cast<int>(scores.size());
    if (g.pairs >= 2) {
      try {
        g.rho = stats::spearman_rho(scores, fitness);
        g.tau = stats::kendall_tau(scores, fitness);
        g.valid = true;
      } catch (const std::invalid_argument&) {
        g.valid = false;  // degenerate (e.g. constant scores): flagged
      }
    }
    if (g.valid && g.generation > warmup) {
      rhos.push_back(g.rho);
      taus.push_back(g.tau);
    }
    report.per_generation.push_back(g);
  }
  report.counted = static_cast<int>(rhos.size());
  if (!rhos.empty()) {
    report.mean_rho = mean_of(rhos);
    report.mean_tau = mean_of(taus);
    report.std_rho = stddev_of(rhos, report.mean_rho);
    report.std_tau = stddev_of(taus, report.mean_tau);
  }
  return report;
}

void export_artifacts(const fs::path& run_dir, const fs::path& export_dir) {
  const record::RecordStream stream =
      record::read_stream((run_dir / "records.jsonl").string());
  fs::create_directories(export_dir);

  auto curve = open_out(export_dir / "curve.csv");
  curve << "generation,real_evals_used,best_fitness\n";
  for (const auto& r : stream.generations) {
    curve << r.generation << "," << r.real_evals_used << ","
          << format_double(r.best_fitness) << "\n";
  }
  curve.close();

  int latent_dim = 0;
  for (const auto& r : stream.generations) {
    for (const auto& s : r.subpops) {
      latent_dim = std::max<int>(latent_dim, s.selected_latent.size());
    }
  }
  auto latents = open_out(export_dir / "latents.csv");
  latents << "generation,subpop,selected_index,selected_fitness,score";
  for (int k = 0; k < latent_dim; ++k) latents << ",z" << k;
  latents << "\n";
  for (const auto& r : stream.generations) {
    for (const auto& s : r.subpops) {
      latents << r.generation << "," << s.subpop << "," << s.selected_index
              << "," << format_double(s.selected_fitness) << ","
              << format_double(s.scores[s.selected_index]);
      for (int k = 0; k < latent_dim; ++k) {
        latents << ",";
        if (k < s.selected_latent.size()) {
          latents << format_double(s.selected_latent[k]);
        }
      }
      latents << "\n";
    }
  }
  latents.close();

  const bool any_audit =
      std::any_of(stream.generations.begin(), stream.generations.end(),
                  [](const auto& r) { return !r.audit.empty(); });
  if (any_audit) {
    const RunConfig cfg = run_config_from_json(stream.config_json);
    write_rank_report(rank_consistency(stream.generations, cfg.audit_warmup),
                      export_dir);
  }
}

void write_rank_report(const RankConsistencyReport& report,
                       const fs::path& dir) {
  fs::create_directories(dir);
  auto rank_csv = open_out(dir / "rank_consistency.csv");
  rank_csv << "generation,pairs,rho,tau,valid\n";
  for (const auto& g : report.per_generation) {
    rank_csv << g.generation << "," << g.pairs << ",";
    if (g.valid) rank_csv << format_double(g.rho);
    rank_csv << ",";
    if (g.valid) rank_csv << format_double(g.tau);
    rank_csv << "," << (g.valid ? 1 : 0) << "\n";
  }
  rank_csv.close();

  ordered_json agg;
  agg["warmup"] = report.warmup;
  agg["generations_counted"] = report.counted;
  agg["mean_rho"] = report.mean_rho;
  agg["mean_tau"] = report.mean_tau;
  agg["std_rho"] = report.std_rho;
  agg["std_tau"] = report.std_tau;
  checkpoint::write_file((dir / "rank_consistency.json").string(),
                         agg.dump(2) + "\n");
}

}  // namespace hyperncs::harness
