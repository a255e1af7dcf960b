#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "ensuq/bayes.hpp"
#include "ensuq/credal.hpp"

namespace {

ensuq::EnsembleOutput random_ensemble(std::size_t classes, std::size_t members, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> ll(-8.0, 0.0);
  std::vector<ensuq::ProbVector> cols;
  std::vector<double> lls;
  for (std::size_t m = 0; m < members; ++m) {
    std::vector<double> p(classes);
    double total = 0.0;
    for (auto& x : p) total += (x = ex(rng));
    for (auto& x : p) x /= total;
    cols.push_back(ensuq::ProbVector::from(p));
    lls.push_back(ll(rng));
  }
  return ensuq::EnsembleOutput(std::move(cols), std::move(lls));
}

void BM_CapacitiesLfp(benchmark::State& state) {
  const auto ens = random_ensemble(static_cast<std::size_t>(state.range(0)), 10, 1);
  for (auto _ : state) benchmark::DoNotOptimize(ensuq::capacities_lfp(ens, 2.0));
}
BENCHMARK(BM_CapacitiesLfp)->Arg(2)->Arg(3)->Arg(5)->Arg(8);

void BM_CredalSet(benchmark::State& state) {
  const auto ens = random_ensemble(3, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(ensuq::credal_set(ens, 2.0));
}
BENCHMARK(BM_CredalSet)->Arg(4)->Arg(10)->Arg(14);

void BM_UpperEntropy(benchmark::State& state) {
  const auto q = ensuq::credal_set(random_ensemble(static_cast<std::size_t>(state.range(0)), 10, 3), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(ensuq::upper_entropy(q));
}
BENCHMARK(BM_UpperEntropy)->Arg(2)->Arg(3)->Arg(5);

void BM_LeviMeasures(benchmark::State& state) {
  const auto ens = random_ensemble(static_cast<std::size_t>(state.range(0)), 10, 4);
  for (auto _ : state) benchmark::DoNotOptimize(ensuq::levi_measures(ens, 2.0));
}
BENCHMARK(BM_LeviMeasures)->Arg(2)->Arg(3)->Arg(5);

void BM_BayesDecomposition(benchmark::State& state) {
  const auto ens = random_ensemble(static_cast<std::size_t>(state.range(0)), 10, 5);
  for (auto _ : state) benchmark::DoNotOptimize(ensuq::bayes_decomposition(ens));
}
BENCHMARK(BM_BayesDecomposition)->Arg(2)->Arg(10);

}  // namespace
