#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "ensuq/experiment.hpp"
#include "ensuq/forest.hpp"

namespace {

// Two noisy Gaussian blobs per class along the first feature.
ensuq::Dataset blobs(std::size_t rows, std::size_t dims, std::size_t classes) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> x;
  std::vector<int> y;
  for (std::size_t i = 0; i < rows; ++i) {
    const int label = static_cast<int>(i % classes);
    for (std::size_t j = 0; j < dims; ++j) x.push_back(noise(rng) + (j == 0 ? 1.5 * label : 0.0));
    y.push_back(label);
  }
  return ensuq::Dataset(std::move(x), dims, std::move(y), classes);
}

void BM_TrainForest(benchmark::State& state) {
  const auto data = blobs(static_cast<std::size_t>(state.range(0)), 8, 3);
  ensuq::ForestConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(ensuq::train_forest(data, cfg));
}
BENCHMARK(BM_TrainForest)->Arg(150)->Arg(600)->Arg(2000);

void BM_SingleRun(benchmark::State& state) {
  const auto data = blobs(300, 6, 3);
  ensuq::ExperimentConfig cfg;
  cfg.runs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ensuq::run_single(data, cfg, 0));
}
BENCHMARK(BM_SingleRun)->Unit(benchmark::kMillisecond);

}  // namespace
