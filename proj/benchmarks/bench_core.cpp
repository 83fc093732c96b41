#include <benchmark/benchmark.h>

#include "spherecode/spherecode.hpp"

namespace {

spherecode::SphericalConfiguration random_configuration(int dim, int count,
                                                        std::uint64_t seed) {
  spherecode::SplitRng rng(seed, 0);
  return spherecode::SphericalConfiguration(rng.unit_columns(dim, count));
}

void BM_MinNormProjection(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int hull = static_cast<int>(state.range(1));
  spherecode::SplitRng rng(7, 0);
  const Eigen::VectorXd query = rng.unit_columns(dim, 1).col(0);
  const Eigen::MatrixXd points = rng.unit_columns(dim, hull);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spherecode::min_norm_projection(query, points));
  }
}
BENCHMARK(BM_MinNormProjection)->Args({3, 8})->Args({8, 31})->Args({16, 63});

void BM_RhoOneVsRest(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int count = static_cast<int>(state.range(1));
  const auto config = random_configuration(dim, count, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spherecode::rho_one_vs_rest(config));
  }
}
BENCHMARK(BM_RhoOneVsRest)->Args({2, 10})->Args({8, 32})->Args({16, 64});

void BM_SmoothedCeGradients(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int count = static_cast<int>(state.range(1));
  spherecode::SplitRng rng(13, 0);
  const Eigen::MatrixXd classifier = rng.unit_columns(dim, count);
  const Eigen::MatrixXd features = rng.unit_columns(dim, count);
  std::vector<int> labels(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    labels[static_cast<std::size_t>(k)] = k;
  }
  Eigen::MatrixXd grad_w;
  Eigen::MatrixXd grad_h;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spherecode::smoothed_ce_gradients(
        classifier, features, labels, 0.1, &grad_w, &grad_h));
  }
}
BENCHMARK(BM_SmoothedCeGradients)->Args({2, 10})->Args({8, 32})->Args({16, 64});

void BM_SolveSoftmaxCodeSmall(benchmark::State& state) {
  spherecode::SolverConfig config;
  config.dim = 2;
  config.count = 6;
  config.restarts = 2;
  config.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spherecode::solve_softmax_code(config));
  }
}
BENCHMARK(BM_SolveSoftmaxCodeSmall)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
