#include <benchmark/benchmark.h>

#include <random>

#include "hyperncs/dense_net.hpp"

using namespace hyperncs::net;

namespace {

void BM_Forward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DenseNet net = make_dense_net({n, 256, 64, 32}, Activation::kTanh, 1);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::VectorXd x =
      Eigen::VectorXd::NullaryExpr(n, [&](auto) { return gauss(rng); });
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(net, x));
  }
}

void BM_ForwardBackward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DenseNet net = make_dense_net({n, 256, 64, 32}, Activation::kTanh, 1);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::VectorXd x =
      Eigen::VectorXd::NullaryExpr(n, [&](auto) { return gauss(rng); });
  const Eigen::VectorXd g =
      Eigen::VectorXd::NullaryExpr(32, [&](auto) { return gauss(rng); });
  ForwardCache cache;
  for (auto _ : state) {
    forward(net, x, &cache);
    benchmark::DoNotOptimize(backward(net, cache, g));
  }
}

}  // namespace

BENCHMARK(BM_Forward)->Arg(200)->Arg(512);
BENCHMARK(BM_ForwardBackward)->Arg(200)->Arg(512);

BENCHMARK_MAIN();
