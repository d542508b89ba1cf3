#include <benchmark/benchmark.h>

#include <random>

#include "hyperncs/hyperbolic.hpp"

using namespace hyperncs::hyperbolic;

namespace {

Eigen::VectorXd random_vector(int dim, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, scale);
  return Eigen::VectorXd::NullaryExpr(dim, [&](auto) { return gauss(rng); });
}

void BM_MobiusAdd(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const BallPoint x = exp_map_zero(random_vector(dim, 0.5, rng), 1.0);
  const BallPoint y = exp_map_zero(random_vector(dim, 0.5, rng), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mobius_add(x, y));
  }
}

void BM_OriginRoundTrip(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const Eigen::VectorXd v = random_vector(dim, 1.0, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_map_zero(exp_map_zero(v, 1.0)));
  }
}

}  // namespace

BENCHMARK(BM_MobiusAdd)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_OriginRoundTrip)->Arg(16)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
