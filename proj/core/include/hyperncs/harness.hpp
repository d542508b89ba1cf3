#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hyperncs/ncs.hpp"
#include "hyperncs/record.hpp"
#include "hyperncs/run_config.hpp"

namespace hyperncs::harness {

/// One repetition: builds the problem, embedding and surrogate from the
/// config, runs the search, and writes records.jsonl, timings.csv,
/// summary.json and trained checkpoints into out_dir.
search::RunResult execute_run(const RunConfig& cfg, std::uint64_t seed,
                              const std::filesystem::path& out_dir);

/// Every seed of cfg.seeds into out_dir/rep_<seed>/, plus summary.json with
/// mean and dispersion of the final best fitness.
std::vector<search::RunResult> execute_all(
    const RunConfig& cfg, const std::filesystem::path& out_dir, int jobs = 1);

/// Pretrains an autoencoder per the config's embedding.ae block and writes
/// the checkpoint plus loss history.
void pretrain_autoencoder(const RunConfig& cfg, std::uint64_t seed,
                          const std::filesystem::path& out_dir);

struct SweepCell {
  std::string label;       // canonical, e.g. "ae+hnn(c=1)" or "none"
  std::string embedding;   // ae | random_projection | none
  std::string surrogate;   // hnn | euclidean | none
  double curvature = 1.0;
};

struct SweepCellResult {
  SweepCell cell;
  std::vector<double> final_best;  // aligned with seeds
  double mean = 0.0;
  double stddev = 0.0;
};

/// Canonical deduplicated cell list: surrogate "none" collapses the embedding
/// and curvature axes, "euclidean" collapses curvature.
std::vector<SweepCell> enumerate_cells(const SweepAxes& axes);

/// Runs every cell with the same seeds and budget; one subdirectory per cell
/// and repetition; writes sweep_summary.csv. `jobs` bounds concurrent runs
/// (each run is fully independent).
std::vector<SweepCellResult> run_sweep(const SweepConfig& cfg,
                                       const std::filesystem::path& out_dir,
                                       int jobs = 1);

struct RankGeneration {
  int generation = 0;
  int pairs = 0;
  double rho = 0.0;
  double tau = 0.0;
  bool valid = false;  // false when the correlation was undefined (flagged)
};

struct RankConsistencyReport {
  std::vector<RankGeneration> per_generation;
  int warmup = 0;
  int counted = 0;  // valid generations after warm-up
  double mean_rho = 0.0;
  double mean_tau = 0.0;
  double std_rho = 0.0;
  double std_tau = 0.0;
};

/// Per-generation Spearman/Kendall between surrogate scores and audited true
/// fitness (pooled over subpopulations); aggregates skip the first `warmup`
/// generations and flagged (degenerate) generations. Throws if the run
/// carries no audit data.
RankConsistencyReport rank_consistency(
    const std::vector<search::GenerationRecord>& records, int warmup);

/// Writes rank_consistency.csv (per generation) and rank_consistency.json
/// (aggregates) into dir.
void write_rank_report(const RankConsistencyReport& report,
                       const std::filesystem::path& dir);

/// Reads a repetition directory's records.jsonl and writes curve.csv,
/// latents.csv and (when audit data is present) rank_consistency.csv/.json
/// into export_dir.
void export_artifacts(const std::filesystem::path& run_dir,
                      const std::filesystem::path& export_dir);

/// Deterministic shortest round-trip formatting used in all CSV output.
std::string format_double(double v);

}  // namespace hyperncs::harness
