#include <benchmark/benchmark.h>

#include "hyperncs/ncs.hpp"

using namespace hyperncs;

namespace {

// one full generation at desk scale: sample, encode, pre-select, evaluate,
// accept, train
void BM_Generation(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  auto problem = std::make_shared<problems::SphereProblem>(dim, 1);
  surrogate::HnnTrainOptions topts;
  topts.epochs = 5;
  surrogate::HnnSurrogate hnn(
      surrogate::make_hnn_model(dim, {64, 32}, 1.0, 2), 50, topts);
  search::NcsOptions opts;
  opts.subpopulations = 5;
  opts.candidates = 10;
  opts.seed = 3;
  search::NcsEngine engine(problem, nullptr, hnn, opts);
  engine.initialize();
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.run_generation());
  }
}

}  // namespace

BENCHMARK(BM_Generation)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
