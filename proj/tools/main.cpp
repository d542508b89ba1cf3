// Command-line front end: pretraining, search runs, ablation sweeps,
// rank-consistency reports and raw-data export.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperncs/harness.hpp"
#include "hyperncs/record.hpp"
#include "hyperncs/run_config.hpp"

namespace fs = std::filesystem;
using hyperncs::harness::ConfigError;

namespace {

void print_error(const std::string& type, const std::string& message,
                 const std::vector<std::string>& fields = {}) {
  nlohmann::ordered_json j;
  j["error"]["type"] = type;
  j["error"]["message"] = message;
  if (!fields.empty()) j["error"]["fields"] = fields;
  std::cerr << j.dump() << std::endl;
}

int default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperncs: surrogate-assisted negatively correlated search"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", run_dir;
  std::int64_t seed_override = -1;
  int jobs = default_jobs();
  int warmup_override = -1;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "configuration file");
    if (needs_config) opt->required();
    cmd->add_option("--seed", seed_override, "override the config seed list");
    cmd->add_option("--out", out_dir, "output directory");
  };

  auto* cmd_pretrain = app.add_subcommand(
      "pretrain-ae", "train the policy autoencoder and save its checkpoint");
  add_common(cmd_pretrain, true);

  auto* cmd_run = app.add_subcommand("run", "execute a search run per config");
  add_common(cmd_run, true);
  cmd_run->add_option("--jobs", jobs, "concurrent repetitions");

  auto* cmd_sweep =
      app.add_subcommand("sweep", "run an ablation sweep over config axes");
  add_common(cmd_sweep, true);
  cmd_sweep->add_option("--jobs", jobs, "concurrent runs");

  auto* cmd_audit = app.add_subcommand(
      "audit-report", "rank-consistency report from a finished run");
  cmd_audit->add_option("--run", run_dir, "run repetition directory")->required();
  cmd_audit->add_option("--out", out_dir, "output directory");
  cmd_audit->add_option("--warmup", warmup_override,
                        "override the aggregate warm-up generation count");

  auto* cmd_export =
      app.add_subcommand("export", "CSV exports from a finished run");
  cmd_export->add_option("--run", run_dir, "run repetition directory")->required();
  cmd_export->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_pretrain->parsed()) {
      auto cfg = hyperncs::harness::load_run_config(config_path);
      const std::uint64_t seed =
          seed_override >= 0 ? static_cast<std::uint64_t>(seed_override)
                             : cfg.seeds.front();
      hyperncs::harness::pretrain_autoencoder(cfg, seed, out_dir);
      std::cout << "wrote " << (fs::path(out_dir) / "ae.json").string() << "\n";
    } else if (cmd_run->parsed()) {
      auto cfg = hyperncs::harness::load_run_config(config_path);
      if (seed_override >= 0) {
        cfg.seeds = {static_cast<std::uint64_t>(seed_override)};
      }
      const auto results = hyperncs::harness::execute_all(cfg, out_dir, jobs);
      for (size_t i = 0; i < results.size(); ++i) {
        std::cout << "seed " << cfg.seeds[i] << ": best_fitness "
                  << hyperncs::harness::format_double(results[i].best_fitness)
                  << " after " << results[i].real_evals_used
                  << " real evaluations\n";
      }
    } else if (cmd_sweep->parsed()) {
      auto cfg = hyperncs::harness::load_sweep_config(config_path);
      if (seed_override >= 0) {
        cfg.base.seeds = {static_cast<std::uint64_t>(seed_override)};
      }
      const auto cells = hyperncs::harness::run_sweep(cfg, out_dir, jobs);
      for (const auto& cell : cells) {
        std::cout << cell.cell.label << ": mean "
                  << hyperncs::harness::format_double(cell.mean) << " +- "
                  << hyperncs::harness::format_double(cell.stddev) << "\n";
      }
      std::cout << "summary: "
                << (fs::path(out_dir) / "sweep_summary.csv").string() << "\n";
    } else if (cmd_audit->parsed()) {
      const auto stream = hyperncs::record::read_stream(
          (fs::path(run_dir) / "records.jsonl").string());
      const auto cfg = hyperncs::harness::run_config_from_json(stream.config_json);
      const int warmup = warmup_override >= 0 ? warmup_override : cfg.audit_warmup;
      const auto report =
          hyperncs::harness::rank_consistency(stream.generations, warmup);
      hyperncs::harness::write_rank_report(report, out_dir);
      std::cout << "generations counted: " << report.counted
                << " (warmup " << report.warmup << ")\n"
                << "mean rho: "
                << hyperncs::harness::format_double(report.mean_rho)
                << " +- " << hyperncs::harness::format_double(report.std_rho)
                << "\n"
                << "mean tau: "
                << hyperncs::harness::format_double(report.mean_tau)
                << " +- " << hyperncs::harness::format_double(report.std_tau)
                << "\n";
    } else if (cmd_export->parsed()) {
      hyperncs::harness::export_artifacts(run_dir, out_dir);
      std::cout << "exports written to " << out_dir << "\n";
    }
  } catch (const ConfigError& e) {
    print_error("config_validation", e.what(), e.fields());
    return 1;
  } catch (const std::exception& e) {
    print_error("runtime", e.what());
    return 2;
  }
  return 0;
}
