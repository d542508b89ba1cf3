#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperncs/problems.hpp"

namespace hyperncs::harness {

/// Config validation failure; lists every offending field by dotted path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> fields)
      : std::runtime_error("invalid configuration: " + join(fields)),
        fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  static std::string join(const std::vector<std::string>& fields);
  std::vector<std::string> fields_;
};

struct AeConfig {
  std::vector<int> hidden = {256, 64};
  int samples = 1024;
  int epochs = 20;
  int batch_size = 32;
  double learning_rate = 1e-3;
  int anchors = 8;
  double anchor_spread = 1.0;
  bool harvest_init = false;  // add the run's initial means to the dataset
  std::string checkpoint;     // optional path to a pretrained autoencoder
};

/// The versioned run-configuration document; see docs/config.md for the JSON
/// schema. Unknown keys are rejected.
struct RunConfig {
  int version = 1;

  problems::ProblemSpec problem;

  // search
  int subpopulations = 5;
  int candidates = 10;
  double phi = 1.0;
  double sigma_init = 1.0;
  long budget = 1000;  // real evaluations after initialisation
  int one_fifth_epoch_len = 10;
  double one_fifth_factor = 0.99;
  bool normalize_acceptance = false;

  // embedding: ae | random_projection | none
  std::string embedding = "ae";
  int latent_dim = 32;
  AeConfig ae;

  // surrogate: hnn | euclidean | none | oracle
  std::string surrogate = "hnn";
  double curvature = 1.0;
  std::vector<int> surrogate_hidden = {64, 32};
  double surrogate_learning_rate = 1e-2;
  int surrogate_epochs = 5;       // incremental epochs per generation
  int buffer_generations = 10;    // buffer capacity = this * subpopulations

  // audit (rank-consistency measurement channel)
  bool audit = false;
  int audit_k = 8;
  int audit_warmup = 10;

  std::vector<std::uint64_t> seeds = {1};

  int resolved_dim() const;
};

RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& cfg);
RunConfig load_run_config(const std::string& path);

/// Throws ConfigError listing every invalid field.
void validate(const RunConfig& cfg);

struct SweepAxes {
  std::vector<std::string> embedding = {"ae"};
  std::vector<std::string> surrogate = {"hnn"};
  std::vector<double> curvature = {1.0};
};

struct SweepConfig {
  RunConfig base;  // seeds live at sweep level; base must not set them
  SweepAxes axes;
};

SweepConfig sweep_config_from_json(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);
void validate(const SweepConfig& cfg);

}  // namespace hyperncs::harness
