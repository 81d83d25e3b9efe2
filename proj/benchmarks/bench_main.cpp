#include <benchmark/benchmark.h>

#include "simlearn/harness.hpp"
#include "simlearn/kernels.hpp"
#include "simlearn/optimizer.hpp"

using namespace simlearn;

namespace {

SyntheticData dataset(Eigen::Index m) {
  SyntheticSpec spec;
  spec.m = m;
  spec.n_features = 8;
  spec.k_true = 4;
  spec.seed = 1;
  return generate_synthetic(spec);
}

void BM_PairwiseDistances(benchmark::State& state) {
  const auto data = dataset(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_distances(data.features.values()));
}
BENCHMARK(BM_PairwiseDistances)->Arg(50)->Arg(200)->Arg(800);

void BM_RbfGram(benchmark::State& state) {
  const auto data = dataset(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gram(KernelSpec::rbf(0.5), data.features));
}
BENCHMARK(BM_RbfGram)->Arg(50)->Arg(200)->Arg(800);

void BM_LinearGradient(benchmark::State& state) {
  const auto data = dataset(state.range(0));
  const Model h = initial_model(data.features, LinearClass{4, 1.0}, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(risk_gradient(h, data.features, data.distances, 1e-9));
}
BENCHMARK(BM_LinearGradient)->Arg(50)->Arg(200)->Arg(800);

void BM_KernelGradient(benchmark::State& state) {
  const auto data = dataset(state.range(0));
  const Model h = initial_model(data.features, KernelClass{KernelSpec::rbf(0.5), 4, 1.0}, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(risk_gradient(h, data.features, data.distances, 1e-9));
}
BENCHMARK(BM_KernelGradient)->Arg(50)->Arg(200);

void BM_TrainLinear(benchmark::State& state) {
  const auto data = dataset(state.range(0));
  TrainConfig cfg;
  cfg.max_iters = 100;
  cfg.grad_tol = 1e-300;
  for (auto _ : state)
    benchmark::DoNotOptimize(train(data.features, data.distances, LinearClass{4, 1.0}, cfg));
}
BENCHMARK(BM_TrainLinear)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
