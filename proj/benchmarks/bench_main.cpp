#include <benchmark/benchmark.h>

#include <random>

#include "shapfoil/foil.hpp"
#include "shapfoil/shap.hpp"
#include "shapfoil/svm.hpp"
#include "shapfoil/synth.hpp"

using namespace shapfoil;

namespace {

std::vector<std::vector<double>> random_points(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> X(n, std::vector<double>(d));
  for (auto& row : X)
    for (double& v : row) v = g(rng);
  return X;
}

std::vector<int> alternating_labels(int n) {
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) y[i] = i % 2 ? -1 : 1;
  return y;
}

}  // namespace

static void BM_KernelEval(benchmark::State& state) {
  int d = static_cast<int>(state.range(0));
  auto X = random_points(2, d, 11);
  KernelSpec k = RbfKernel{0.5};
  for (auto _ : state) benchmark::DoNotOptimize(kernel_eval(k, X[0], X[1]));
}
BENCHMARK(BM_KernelEval)->Arg(8)->Arg(32)->Arg(128);

static void BM_SmoTrain(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto X = random_points(n, 6, 23);
  auto y = alternating_labels(n);
  Hyperparams h;
  h.kernel = RbfKernel{1.0};
  h.C = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(train(X, y, h));
}
BENCHMARK(BM_SmoTrain)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

static void BM_ShapleyExact(benchmark::State& state) {
  int d = static_cast<int>(state.range(0));
  auto X = random_points(40, d, 37);
  auto y = alternating_labels(40);
  Hyperparams h;
  h.kernel = RbfKernel{0.5};
  h.C = 1.0;
  SvmModel m = train(X, y, h);
  for (auto _ : state) benchmark::DoNotOptimize(shapley_exact(m, X, 0, X));
}
BENCHMARK(BM_ShapleyExact)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_ShapleySampled(benchmark::State& state) {
  auto X = random_points(40, 20, 41);
  auto y = alternating_labels(40);
  Hyperparams h;
  h.kernel = RbfKernel{0.5};
  h.C = 1.0;
  SvmModel m = train(X, y, h);
  for (auto _ : state)
    benchmark::DoNotOptimize(shapley_sampled(m, X, 0, X, static_cast<int>(state.range(0)), 7));
}
BENCHMARK(BM_ShapleySampled)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_FoilInduce(benchmark::State& state) {
  Dataset d = synthetic_dataset("clusters3", 3, static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(foil_induce(d, FoilParams{}));
}
BENCHMARK(BM_FoilInduce)->Arg(150)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
