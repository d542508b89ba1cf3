#include "hyperncs/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "hyperncs/checkpoint.hpp"

namespace hyperncs::harness {

using nlohmann::ordered_json;

std::string ConfigError::join(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += "; ";
    out += fields[i];
  }
  return out;
}

int RunConfig::resolved_dim() const {
  if (problem.name == "pointmass") {
    return problems::ControlTask{}.param_count();
  }
  return problem.dim;
}

namespace {

void check_keys(const ordered_json& j, const std::set<std::string>& allowed,
                const std::string& prefix, std::vector<std::string>& errors) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      errors.push_back(prefix + item.key() + ": unknown key");
    }
  }
}

RunConfig parse_run(const ordered_json& j, std::vector<std::string>& errors,
                    const std::string& prefix) {
  RunConfig cfg;
  check_keys(j,
             {"version", "problem", "search", "embedding", "surrogate", "audit",
              "seeds"},
             prefix, errors);
  cfg.version = j.value("version", 1);

  if (j.contains("problem")) {
    const auto& jp = j.at("problem");
    check_keys(jp, {"name", "dim", "seed", "eval_latency_ms"},
               prefix + "problem.", errors);
    cfg.problem.name = jp.value("name", cfg.problem.name);
    cfg.problem.dim = jp.value("dim", cfg.problem.dim);
    cfg.problem.seed = jp.value("seed", cfg.problem.seed);
    cfg.problem.eval_latency_ms =
        jp.value("eval_latency_ms", cfg.problem.eval_latency_ms);
  }
  if (j.contains("search")) {
    const auto& js = j.at("search");
    check_keys(js,
               {"subpopulations", "candidates", "phi", "sigma_init", "budget",
                "one_fifth_epoch_len", "one_fifth_factor",
                "normalize_acceptance"},
               prefix + "search.", errors);
    cfg.subpopulations = js.value("subpopulations", cfg.subpopulations);
    cfg.candidates = js.value("candidates", cfg.candidates);
    cfg.phi = js.value("phi", cfg.phi);
    cfg.sigma_init = js.value("sigma_init", cfg.sigma_init);
    cfg.budget = js.value("budget", cfg.budget);
    cfg.one_fifth_epoch_len =
        js.value("one_fifth_epoch_len", cfg.one_fifth_epoch_len);
    cfg.one_fifth_factor = js.value("one_fifth_factor", cfg.one_fifth_factor);
    cfg.normalize_acceptance =
        js.value("normalize_acceptance", cfg.normalize_acceptance);
  }
  if (j.contains("embedding")) {
    const auto& je = j.at("embedding");
    check_keys(je, {"kind", "latent_dim", "ae"}, prefix + "embedding.", errors);
    cfg.embedding = je.value("kind", cfg.embedding);
    cfg.latent_dim = je.value("latent_dim", cfg.latent_dim);
    if (je.contains("ae")) {
      const auto& ja = je.at("ae");
      check_keys(ja,
                 {"hidden", "samples", "epochs", "batch_size", "learning_rate",
                  "anchors", "anchor_spread", "harvest_init", "checkpoint"},
                 prefix + "embedding.ae.", errors);
      cfg.ae.hidden = ja.value("hidden", cfg.ae.hidden);
      cfg.ae.samples = ja.value("samples", cfg.ae.samples);
      cfg.ae.epochs = ja.value("epochs", cfg.ae.epochs);
      cfg.ae.batch_size = ja.value("batch_size", cfg.ae.batch_size);
      cfg.ae.learning_rate = ja.value("learning_rate", cfg.ae.learning_rate);
      cfg.ae.anchors = ja.value("anchors", cfg.ae.anchors);
      cfg.ae.anchor_spread = ja.value("anchor_spread", cfg.ae.anchor_spread);
      cfg.ae.harvest_init = ja.value("harvest_init", cfg.ae.harvest_init);
      cfg.ae.checkpoint = ja.value("checkpoint", cfg.ae.checkpoint);
    }
  }
  if (j.contains("surrogate")) {
    const auto& js = j.at("surrogate");
    check_keys(js,
               {"kind", "curvature", "hidden", "learning_rate",
                "epochs_per_generation", "buffer_generations"},
               prefix + "surrogate.", errors);
    cfg.surrogate = js.value("kind", cfg.surrogate);
    cfg.curvature = js.value("curvature", cfg.curvature);
    cfg.surrogate_hidden = js.value("hidden", cfg.surrogate_hidden);
    cfg.surrogate_learning_rate =
        js.value("learning_rate", cfg.surrogate_learning_rate);
    cfg.surrogate_epochs =
        js.value("epochs_per_generation", cfg.surrogate_epochs);
    cfg.buffer_generations =
        js.value("buffer_generations", cfg.buffer_generations);
  }
  if (j.contains("audit")) {
    const auto& ja = j.at("audit");
    check_keys(ja, {"enabled", "audit_k", "warmup"}, prefix + "audit.", errors);
    cfg.audit = ja.value("enabled", cfg.audit);
    cfg.audit_k = ja.value("audit_k", cfg.audit_k);
    cfg.audit_warmup = ja.value("warmup", cfg.audit_warmup);
  }
  if (j.contains("seeds")) {
    cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  }
  return cfg;
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  std::vector<std::string> errors;
  const ordered_json j = ordered_json::parse(text);
  RunConfig cfg = parse_run(j, errors, "");
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
  ordered_json j;
  j["version"] = cfg.version;
  j["problem"] = {{"name", cfg.problem.name},
                  {"dim", cfg.problem.dim},
                  {"seed", cfg.problem.seed},
                  {"eval_latency_ms", cfg.problem.eval_latency_ms}};
  j["search"] = {{"subpopulations", cfg.subpopulations},
                 {"candidates", cfg.candidates},
                 {"phi", cfg.phi},
                 {"sigma_init", cfg.sigma_init},
                 {"budget", cfg.budget},
                 {"one_fifth_epoch_len", cfg.one_fifth_epoch_len},
                 {"one_fifth_factor", cfg.one_fifth_factor},
                 {"normalize_acceptance", cfg.normalize_acceptance}};
  j["embedding"] = {{"kind", cfg.embedding}, {"latent_dim", cfg.latent_dim}};
  j["embedding"]["ae"] = {{"hidden", cfg.ae.hidden},
                          {"samples", cfg.ae.samples},
                          {"epochs", cfg.ae.epochs},
                          {"batch_size", cfg.ae.batch_size},
                          {"learning_rate", cfg.ae.learning_rate},
                          {"anchors", cfg.ae.anchors},
                          {"anchor_spread", cfg.ae.anchor_spread},
                          {"harvest_init", cfg.ae.harvest_init},
                          {"checkpoint", cfg.ae.checkpoint}};
  j["surrogate"] = {{"kind", cfg.surrogate},
                    {"curvature", cfg.curvature},
                    {"hidden", cfg.surrogate_hidden},
                    {"learning_rate", cfg.surrogate_learning_rate},
                    {"epochs_per_generation", cfg.surrogate_epochs},
                    {"buffer_generations", cfg.buffer_generations}};
  j["audit"] = {{"enabled", cfg.audit},
                {"audit_k", cfg.audit_k},
                {"warmup", cfg.audit_warmup}};
  j["seeds"] = cfg.seeds;
  return j.dump();
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_json(checkpoint::read_file(path));
}

void validate(const RunConfig& cfg) {
  std::vector<std::string> errors;
  auto fail = [&](const std::string& field, const std::string& why) {
    errors.push_back(field + ": " + why);
  };

  if (cfg.version != 1) fail("version", "unsupported (expected 1)");
  static const std::set<std::string> problems_known = {"sphere", "rastrigin",
                                                       "pointmass"};
  if (!problems_known.count(cfg.problem.name)) {
    fail("problem.name", "unknown problem '" + cfg.problem.name + "'");
  }
  if (cfg.problem.dim < 0) fail("problem.dim", "must be >= 0");
  if (cfg.problem.name == "pointmass" && cfg.problem.dim != 0 &&
      cfg.problem.dim != problems::ControlTask{}.param_count()) {
    fail("problem.dim", "pointmass dim is fixed by the policy architecture");
  }
  if (cfg.problem.name != "pointmass" && cfg.problem.dim < 1) {
    fail("problem.dim", "must be >= 1");
  }
  if (cfg.problem.eval_latency_ms < 0) fail("problem.eval_latency_ms", "must be >= 0");

  if (cfg.subpopulations < 2) fail("search.subpopulations", "must be >= 2");
  if (cfg.candidates < 1) fail("search.candidates", "must be >= 1");
  if (!(cfg.sigma_init > 0.0)) fail("search.sigma_init", "must be > 0");
  if (cfg.budget < 1) fail("search.budget", "must be >= 1");
  if (cfg.one_fifth_epoch_len < 1) fail("search.one_fifth_epoch_len", "must be >= 1");
  if (!(cfg.one_fifth_factor > 0.0 && cfg.one_fifth_factor <= 1.0)) {
    fail("search.one_fifth_factor", "must be in (0, 1]");
  }
  if (!(cfg.phi >= 0.0) || !std::isfinite(cfg.phi)) {
    fail("search.phi", "must be finite and >= 0");
  }

  static const std::set<std::string> embeddings = {"ae", "random_projection",
                                                   "none"};
  if (!embeddings.count(cfg.embedding)) {
    fail("embedding.kind", "must be ae | random_projection | none");
  } else if (cfg.embedding != "none") {
    const int dim = cfg.resolved_dim();
    if (dim > 0 && !(cfg.latent_dim >= 1 && cfg.latent_dim < dim)) {
      fail("embedding.latent_dim", "must satisfy 1 <= m < n");
    }
  }
  if (cfg.embedding == "ae") {
    if (cfg.ae.samples < 1) fail("embedding.ae.samples", "must be >= 1");
    if (cfg.ae.epochs < 0) fail("embedding.ae.epochs", "must be >= 0");
    if (cfg.ae.batch_size < 1) fail("embedding.ae.batch_size", "must be >= 1");
    if (!(cfg.ae.learning_rate > 0.0)) fail("embedding.ae.learning_rate", "must be > 0");
    if (cfg.ae.anchors < 1) fail("embedding.ae.anchors", "must be >= 1");
    if (cfg.ae.anchor_spread < 0.0) fail("embedding.ae.anchor_spread", "must be >= 0");
    for (int h : cfg.ae.hidden) {
      if (h < 1) fail("embedding.ae.hidden", "dims must be >= 1");
    }
    if (!cfg.ae.checkpoint.empty() &&
        !std::filesystem::exists(cfg.ae.checkpoint)) {
      fail("embedding.ae.checkpoint", "file not found: " + cfg.ae.checkpoint);
    }
  }

  static const std::set<std::string> surrogates = {"hnn", "euclidean", "none",
                                                   "oracle"};
  if (!surrogates.count(cfg.surrogate)) {
    fail("surrogate.kind", "must be hnn | euclidean | none | oracle");
  }
  if (!(cfg.curvature >= 0.0)) fail("surrogate.curvature", "must be >= 0");
  if (!(cfg.surrogate_learning_rate > 0.0)) {
    fail("surrogate.learning_rate", "must be > 0");
  }
  if (cfg.surrogate_epochs < 0) fail("surrogate.epochs_per_generation", "must be >= 0");
  if (cfg.buffer_generations < 1) fail("surrogate.buffer_generations", "must be >= 1");
  for (int h : cfg.surrogate_hidden) {
    if (h < 1) fail("surrogate.hidden", "dims must be >= 1");
  }

  if (cfg.audit && cfg.audit_k < 1) fail("audit.audit_k", "must be >= 1");
  if (cfg.audit_warmup < 0) fail("audit.warmup", "must be >= 0");

  if (cfg.seeds.empty()) fail("seeds", "at least one seed required");
  std::set<std::uint64_t> unique(cfg.seeds.begin(), cfg.seeds.end());
  if (unique.size() != cfg.seeds.size()) fail("seeds", "must be distinct");

  if (!errors.empty()) throw ConfigError(std::move(errors));
}

SweepConfig sweep_config_from_json(const std::string& text) {
  std::vector<std::string> errors;
  const ordered_json j = ordered_json::parse(text);
  check_keys(j, {"version", "base", "axes", "seeds"}, "", errors);
  SweepConfig sweep;
  if (!j.contains("base")) {
    errors.push_back("base: required");
  } else {
    if (j.at("base").contains("seeds")) {
      errors.push_back("base.seeds: seeds are sweep-level so every cell shares them");
    }
    sweep.base = parse_run(j.at("base"), errors, "base.");
  }
  if (j.contains("axes")) {
    const auto& ja = j.at("axes");
    check_keys(ja, {"embedding", "surrogate", "curvature"}, "axes.", errors);
    if (ja.contains("embedding")) {
      sweep.axes.embedding = ja.at("embedding").get<std::vector<std::string>>();
    }
    if (ja.contains("surrogate")) {
      sweep.axes.surrogate = ja.at("surrogate").get<std::vector<std::string>>();
    }
    if (ja.contains("curvature")) {
      sweep.axes.curvature = ja.at("curvature").get<std::vector<double>>();
    }
  }
  if (j.contains("seeds")) {
    sweep.base.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return sweep;
}

SweepConfig load_sweep_config(const std::string& path) {
  return sweep_config_from_json(checkpoint::read_file(path));
}

void validate(const SweepConfig& cfg) {
  std::vector<std::string> errors;
  for (const auto& e : cfg.axes.embedding) {
    if (e != "ae" && e != "random_projection") {
      errors.push_back("axes.embedding: invalid value '" + e + "'");
    }
  }
  for (const auto& s : cfg.axes.surrogate) {
    if (s != "hnn" && s != "euclidean" && s != "none") {
      errors.push_back("axes.surrogate: invalid value '" + s + "'");
    }
  }
  for (double c : cfg.axes.curvature) {
    if (!(c >= 0.0)) errors.push_back("axes.curvature: must be >= 0");
  }
  if (cfg.axes.embedding.empty()) errors.push_back("axes.embedding: empty");
  if (cfg.axes.surrogate.empty()) errors.push_back("axes.surrogate: empty");
  if (cfg.axes.curvature.empty()) errors.push_back("axes.curvature: empty");
  if (!errors.empty()) throw ConfigError(std::move(errors));

  RunConfig base = cfg.base;
  // base legality is checked per-cell by run_sweep; here check it once with
  // the first cell values so broken bases fail fast
  base.embedding = cfg.axes.embedding.front();
  base.surrogate = cfg.axes.surrogate.front();
  base.curvature = cfg.axes.curvature.front();
  validate(base);
}

}  // namespace hyperncs::harness
