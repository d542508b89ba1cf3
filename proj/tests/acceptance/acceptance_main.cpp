// Acceptance suite: one self-contained check per criterion, each printing a
// single pass/fail line. Run as `acceptance <n>` for one criterion or
// `acceptance all`.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "hyperncs/checkpoint.hpp"
#include "hyperncs/harness.hpp"
#include "hyperncs/hyperbolic.hpp"
#include "hyperncs/ncs.hpp"
#include "hyperncs/rank_stats.hpp"
#include "hyperncs/record.hpp"
#include "hyperncs/surrogate.hpp"

namespace fs = std::filesystem;
using namespace hyperncs;

namespace {

std::ostringstream detail;

fs::path work_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hyperncs_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Eigen::VectorXd random_direction_vector(int dim, double max_norm,
                                        std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.0, max_norm);
  Eigen::VectorXd v =
      Eigen::VectorXd::NullaryExpr(dim, [&](auto) { return gauss(rng); });
  const double n = v.norm();
  if (n > 0) v *= radius(rng) / n;
  return v;
}

// ---------------------------------------------------------------- C1
bool criterion_round_trips() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int m : {2, 16, 64}) {
    for (double c : {0.5, 1.0, 2.0}) {
      for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::VectorXd v = random_direction_vector(m, 5.0, rng);
        const Eigen::VectorXd back =
            hyperbolic::log_map_zero(hyperbolic::exp_map_zero(v, c));
        worst = std::max(worst,
                         (back - v).norm() / std::max(v.norm(), 1.0));
      }
      for (int trial = 0; trial < 1000; ++trial) {
        const hyperbolic::BallPoint x =
            hyperbolic::exp_map_zero(random_direction_vector(m, 0.5, rng), c);
        const Eigen::VectorXd v = random_direction_vector(m, 2.0, rng);
        const Eigen::VectorXd back =
            hyperbolic::log_map(x, hyperbolic::exp_map(x, v));
        worst = std::max(worst,
                         (back - v).norm() / std::max(v.norm(), 1.0));
      }
    }
  }
  detail << "worst relative round-trip error " << worst;
  return worst < 1e-6;
}

// ---------------------------------------------------------------- C2
Eigen::Vector2d euclidean_mlp_softmax(const surrogate::HnnModel& model,
                                      const Eigen::VectorXd& z) {
  std::vector<double> a(z.data(), z.data() + z.size());
  for (int l = 0; l < model.core.num_layers(); ++l) {
    const auto& w = model.core.weights[l];
    const auto& b = model.core.biases[l];
    std::vector<double> next(w.rows());
    for (int r = 0; r < w.rows(); ++r) {
      double s = b[r];
      for (int c = 0; c < w.cols(); ++c) s += w(r, c) * a[c];
      next[r] = (l + 1 < model.core.num_layers()) ? std::tanh(s) : s;
    }
    a = std::move(next);
  }
  const double mx = std::max(a[0], a[1]);
  const double e0 = std::exp(a[0] - mx), e1 = std::exp(a[1] - mx);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

bool criterion_euclidean_degeneration() {
  std::mt19937_64 rng(11);
  double worst_add = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXd x = random_direction_vector(8, 0.5, rng);
    const Eigen::VectorXd y = random_direction_vector(8, 0.5, rng);
    const auto sum = hyperbolic::mobius_add({x, 1e-8}, {y, 1e-8});
    worst_add = std::max(worst_add, (sum.coords - (x + y)).norm());
  }

  const surrogate::HnnModel model =
      surrogate::make_hnn_model(16, {64, 32}, 1e-8, 7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst_net = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXd z =
        Eigen::VectorXd::NullaryExpr(16, [&](auto) { return gauss(rng); });
    const Eigen::Vector2d got = surrogate::hnn_forward(model, z);
    const Eigen::Vector2d want = euclidean_mlp_softmax(model, z);
    worst_net = std::max(
        worst_net, std::max(std::abs(got[0] - want[0]), std::abs(got[1] - want[1])));
  }
  detail << "mobius deviation " << worst_add << ", forward deviation "
         << worst_net;
  return worst_add < 1e-5 && worst_net < 1e-5;
}

// ---------------------------------------------------------------- C3
bool gradients_match(const net::DenseNet& reference, std::mt19937_64& rng,
                     double* worst) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double h = 1e-5;
  for (int probe = 0; probe < 100; ++probe) {
    net::DenseNet net = reference;
    const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(
        net.input_dim(), [&](auto) { return gauss(rng); });
    const Eigen::VectorXd g = Eigen::VectorXd::NullaryExpr(
        net.output_dim(), [&](auto) { return gauss(rng); });
    net::ForwardCache cache;
    net::forward(net, x, &cache);
    const net::Gradients grads = net::backward(net, cache, g);
    std::uniform_int_distribution<int> pick_layer(0, net.num_layers() - 1);
    for (int k = 0; k < 10; ++k) {
      const int l = pick_layer(rng);
      std::uniform_int_distribution<int> pr(0, net.weights[l].rows() - 1);
      std::uniform_int_distribution<int> pc(0, net.weights[l].cols() - 1);
      const int r = pr(rng), c = pc(rng);
      const double saved = net.weights[l](r, c);
      net.weights[l](r, c) = saved + h;
      const double up = g.dot(net::forward(net, x));
      net.weights[l](r, c) = saved - h;
      const double down = g.dot(net::forward(net, x));
      net.weights[l](r, c) = saved;
      const double fd = (up - down) / (2.0 * h);
      const double an = grads.weights[l](r, c);
      const double rel =
          std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1.0});
      *worst = std::max(*worst, rel);
      if (rel >= 1e-4) return false;
    }
  }
  return true;
}

bool criterion_gradients() {
  std::mt19937_64 rng(31);
  double worst = 0.0;
  // the trainable shapes used downstream: autoencoder halves (tanh and the
  // identity-activation variant) and the classifier core
  const std::vector<net::DenseNet> configs = {
      net::make_dense_net({24, 32, 12, 6}, net::Activation::kTanh, 1),
      net::make_dense_net({6, 12, 32, 24}, net::Activation::kTanh, 2),
      net::make_dense_net({8, 64, 32, 2}, net::Activation::kTanh, 3),
      net::make_dense_net({24, 32, 12, 6}, net::Activation::kIdentity, 4),
  };
  for (const auto& net : configs) {
    if (!gradients_match(net, rng, &worst)) {
      detail << "worst relative gradient error " << worst;
      return false;
    }
  }
  detail << "worst relative gradient error " << worst;
  return true;
}

// ---------------------------------------------------------------- C4
bool criterion_subspace_recovery() {
  const int ambient = 512, intrinsic = 8;
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd w(ambient, intrinsic);
  for (int r = 0; r < ambient; ++r) {
    for (int c = 0; c < intrinsic; ++c) w(r, c) = gauss(rng);
  }
  std::vector<Eigen::VectorXd> samples;
  for (int i = 0; i < 2048; ++i) {
    const Eigen::VectorXd z = Eigen::VectorXd::NullaryExpr(
        intrinsic, [&](auto) { return gauss(rng); });
    samples.push_back(w * z);
  }
  double var = 0.0;
  {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(ambient);
    for (const auto& s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    for (const auto& s : samples) var += (s - mean).squaredNorm();
    var /= static_cast<double>(samples.size() * ambient);
  }

  embed::Autoencoder ae;
  ae.encoder = net::make_dense_net({512, 256, 64, 8},
                                   net::Activation::kIdentity, 5);
  ae.decoder = net::make_dense_net({8, 64, 256, 512},
                                   net::Activation::kIdentity, 6);
  ae.input_dim = 512;
  ae.latent_dim = 8;
  embed::AeTrainOptions opts;
  opts.epochs = 64;
  opts.batch_size = 32;
  opts.learning_rate = 3e-3;
  opts.seed = 7;
  opts.max_steps = 2000;
  opts.stop_at_loss = 0.005;  // normalised units; half the 1% criterion
  const auto history = embed::train_autoencoder(ae, samples, opts);
  const double mse = embed::reconstruction_mse(ae, samples);
  detail << "mse " << mse << " vs variance " << var << " ("
         << 100.0 * mse / var << "% after " << history.steps << " steps)";
  return mse < 0.01 * var && history.steps <= 2000;
}

// ---------------------------------------------------------------- C5
bool criterion_surrogate_classification() {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int dim = 8;
  Eigen::VectorXd dir =
      Eigen::VectorXd::NullaryExpr(dim, [&](auto) { return gauss(rng); });
  dir.normalize();
  std::vector<surrogate::LabeledSample> samples;
  for (int cluster = 0; cluster < 2; ++cluster) {
    const Eigen::VectorXd center = (cluster == 0 ? 3.0 : -3.0) * dir;
    for (int i = 0; i < 100; ++i) {
      surrogate::LabeledSample s;
      s.latent = center + Eigen::VectorXd::NullaryExpr(
                              dim, [&](auto) { return gauss(rng); });
      s.label = cluster == 0 ? 1 : -1;
      s.fitness = s.label;
      samples.push_back(std::move(s));
    }
  }
  std::shuffle(samples.begin(), samples.end(), rng);

  for (double curvature : {1.0, 0.0}) {
    surrogate::HnnModel model =
        surrogate::make_hnn_model(dim, {64, 32}, curvature, 9);
    surrogate::HnnTrainOptions opts;
    opts.epochs = 500;
    opts.learning_rate = 1e-2;
    opts.seed = 10;
    const auto metrics = surrogate::train_incremental(model, samples, opts);
    detail << "c=" << curvature << " test accuracy " << metrics.test_accuracy
           << "; ";
    if (metrics.test_accuracy < 0.95) return false;
  }
  return true;
}

// ---------------------------------------------------------------- C6
harness::RunConfig frugality_config() {
  harness::RunConfig cfg;
  cfg.problem = {"sphere", 30, 7, 0};
  cfg.subpopulations = 5;
  cfg.candidates = 10;
  cfg.budget = 100;  // 20 generations
  cfg.embedding = "ae";
  cfg.latent_dim = 8;
  cfg.ae.hidden = {32, 16};
  cfg.ae.samples = 128;
  cfg.ae.epochs = 4;
  cfg.surrogate = "hnn";
  cfg.surrogate_hidden = {16, 8};
  cfg.seeds = {1};
  return cfg;
}

bool criterion_frugality() {
  const fs::path dir = work_dir("c6");
  harness::RunConfig cfg = frugality_config();
  harness::execute_run(cfg, 1, dir / "m10");
  // M must not change the real-evaluation count
  cfg.candidates = 3;
  harness::execute_run(cfg, 1, dir / "m3");

  for (const char* sub : {"m10", "m3"}) {
    const auto stream =
        record::read_stream((dir / sub / "records.jsonl").string());
    if (stream.init_evals != cfg.subpopulations) {
      detail << sub << ": init consumed " << stream.init_evals;
      return false;
    }
    long previous = stream.init_evals;
    for (const auto& r : stream.generations) {
      if (r.real_evals_used - previous != cfg.subpopulations) {
        detail << sub << ": generation " << r.generation << " consumed "
               << (r.real_evals_used - previous);
        return false;
      }
      previous = r.real_evals_used;
    }
  }
  detail << "exactly N=" << cfg.subpopulations
         << " real evaluations per generation for M in {10, 3}";
  return true;
}

// ---------------------------------------------------------------- C7
harness::RunConfig benefit_base(const std::string& problem, int dim,
                                int latent) {
  harness::RunConfig cfg;
  cfg.problem = {problem, dim, 2025, 0};
  cfg.subpopulations = 5;
  cfg.candidates = 10;
  cfg.budget = 3000;
  cfg.phi = 1.0;
  cfg.sigma_init = 1.0;
  cfg.latent_dim = latent;
  cfg.ae.hidden = dim > 100 ? std::vector<int>{256, 128}
                            : std::vector<int>{128, 64};
  cfg.ae.samples = 512;
  cfg.ae.epochs = 30;
  cfg.ae.anchor_spread = 3.5;
  cfg.surrogate_hidden = {64, 32};
  cfg.surrogate_epochs = 15;
  cfg.buffer_generations = 20;
  cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  return cfg;
}

bool criterion_end_to_end_benefit() {
  const fs::path dir = work_dir("c7");
  harness::SweepAxes axes;
  axes.embedding = {"ae", "random_projection"};
  axes.surrogate = {"hnn", "euclidean", "none"};
  axes.curvature = {1.0};

  bool ok = true;
  for (const auto& [problem, dim, latent] :
       {std::tuple<std::string, int, int>{"sphere", 200, 96},
        std::tuple<std::string, int, int>{"rastrigin", 50, 16}}) {
    harness::SweepConfig sweep;
    sweep.base = benefit_base(problem, dim, latent);
    sweep.axes = axes;
    const auto cells = harness::run_sweep(sweep, dir / problem, 2);

    double ae_hnn = 0.0, none = 0.0, worst = 1e300;
    std::string worst_label;
    for (const auto& cell : cells) {
      detail << problem << "/" << cell.cell.label << " mean "
             << cell.mean << "; ";
      if (cell.cell.label == "ae+hnn(c=1)") ae_hnn = cell.mean;
      if (cell.cell.label == "none") none = cell.mean;
      if (cell.mean < worst) {
        worst = cell.mean;
        worst_label = cell.cell.label;
      }
    }
    if (problem == "sphere" && ae_hnn < none) {
      detail << "[sphere: ae+hnn mean below plain baseline] ";
      ok = false;
    }
    if (worst_label == "ae+hnn(c=1)") {
      detail << "[" << problem << ": ae+hnn is the worst cell] ";
      ok = false;
    }
  }
  return ok;
}

// ---------------------------------------------------------------- C8
bool criterion_rank_consistency() {
  const fs::path dir = work_dir("c8");
  harness::RunConfig cfg = benefit_base("sphere", 200, 96);
  cfg.budget = 250;  // 50 generations
  cfg.audit = true;
  cfg.audit_k = 8;
  cfg.audit_warmup = 9;
  cfg.seeds = {1};
  harness::execute_run(cfg, 1, dir / "hnn");
  const auto stream = record::read_stream((dir / "hnn" / "records.jsonl").string());
  const auto report = harness::rank_consistency(stream.generations, 0);
  double sum = 0.0;
  int count = 0;
  for (const auto& g : report.per_generation) {
    if (g.generation >= 10 && g.generation <= 50 && g.valid) {
      sum += g.rho;
      ++count;
    }
  }
  const double mean_rho = count > 0 ? sum / count : 0.0;
  detail << "mean rho over generations 10-50: " << mean_rho << " (" << count
         << " generations); ";
  if (!(mean_rho > 0.3)) return false;

  // perfect-oracle control: exact rho of 1 every generation
  harness::RunConfig oracle = cfg;
  oracle.surrogate = "oracle";
  oracle.embedding = "none";
  oracle.budget = 100;
  harness::execute_run(oracle, 1, dir / "oracle");
  const auto oracle_stream =
      record::read_stream((dir / "oracle" / "records.jsonl").string());
  const auto oracle_report =
      harness::rank_consistency(oracle_stream.generations, 0);
  for (const auto& g : oracle_report.per_generation) {
    if (!g.valid || g.rho != 1.0) {
      detail << "oracle control rho " << g.rho << " at generation "
             << g.generation;
      return false;
    }
  }
  detail << "oracle control rho exactly 1.0 over "
         << oracle_report.per_generation.size() << " generations";
  return true;
}

// ---------------------------------------------------------------- C9
bool criterion_determinism() {
  const fs::path dir = work_dir("c9");
  harness::RunConfig cfg = frugality_config();
  cfg.budget = 50;
  cfg.audit = true;
  cfg.audit_k = 4;
  checkpoint::write_file((dir / "config.json").string(),
                         harness::run_config_to_json(cfg));

  const std::string cli = HYPERNCS_CLI_PATH;
  auto shell = [&](const std::string& command) {
    const int rc = std::system(command.c_str());
    if (rc != 0) {
      detail << "command failed: " << command << "; ";
      return false;
    }
    return true;
  };
  for (const char* run : {"a", "b"}) {
    const std::string out = (dir / run).string();
    if (!shell(cli + " run --config " + (dir / "config.json").string() +
               " --seed 5 --out " + out)) {
      return false;
    }
    if (!shell(cli + " export --run " + out + "/rep_5 --out " + out +
               "/export")) {
      return false;
    }
  }
  for (const char* file :
       {"rep_5/records.jsonl", "export/curve.csv", "export/latents.csv",
        "export/rank_consistency.csv", "export/rank_consistency.json"}) {
    if (slurp(dir / "a" / file) != slurp(dir / "b" / file) ||
        slurp(dir / "a" / file).empty()) {
      detail << "mismatch or empty: " << file;
      return false;
    }
  }
  detail << "record streams and exports byte-identical across executions";
  return true;
}

struct Criterion {
  int id;
  const char* name;
  bool (*fn)();
  double limit_seconds;
};

const Criterion kCriteria[] = {
    {1, "hyperbolic round-trips", criterion_round_trips, 5},
    {2, "Euclidean degeneration", criterion_euclidean_degeneration, 5},
    {3, "gradient correctness", criterion_gradients, 30},
    {4, "autoencoder subspace recovery", criterion_subspace_recovery, 120},
    {5, "surrogate classification", criterion_surrogate_classification, 60},
    {6, "evaluation frugality", criterion_frugality, 60},
    {7, "end-to-end benefit", criterion_end_to_end_benefit, 900},
    {8, "rank consistency", criterion_rank_consistency, 600},
    {9, "determinism", criterion_determinism, 120},
};

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  int failures = 0;
  for (const auto& criterion : kCriteria) {
    if (which != "all" && which != std::to_string(criterion.id)) continue;
    detail.str("");
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criterion.fn();
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_time = elapsed < criterion.limit_seconds;
    const bool pass = ok && in_time;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "C" << criterion.id << " "
              << criterion.name << " (" << elapsed << "s"
              << (in_time ? "" : ", over time limit") << ") -- " << detail.str()
              << "\n";
    if (!pass) ++failures;
  }
  return failures;
}
