#include "ensuq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "ensuq/bayes.hpp"
#include "ensuq/credal.hpp"
#include "ensuq/error.hpp"
#include "ensuq/forest.hpp"
#include "ensuq/random.hpp"

namespace ensuq {

namespace {

// Guards floor(p * n) against products like 0.29 * 100 = 28.999999999999996.
constexpr double kFloorSlack = 1e-9;

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(Errc::InvalidConfig, "rejection grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] < 1.0)) {
      throw Error(Errc::InvalidConfig, "rejection rates must lie in [0, 1)");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(Errc::InvalidConfig, "rejection grid must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<double> default_rejection_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 18; ++i) grid.push_back(i * 5 / 100.0);
  return grid;
}

void ExperimentConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(Errc::InvalidConfig, "train fraction must lie in (0, 1)");
  }
  if (runs < 1) throw Error(Errc::InvalidConfig, "runs must be >= 1");
  if (!(delta >= 1.0) || !std::isfinite(delta)) throw Error(Errc::InvalidConfig, "delta must be >= 1");
  if (trees < 1) throw Error(Errc::InvalidConfig, "trees must be >= 1");
  if (max_depth < 1) throw Error(Errc::InvalidConfig, "max depth must be >= 1");
  check_grid(rejection_grid);
}

std::uint64_t run_seed(std::uint64_t master, std::size_t run_index) noexcept {
  return derive_seed(master, run_index);
}

Split stratified_split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> by_class(data.classes());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    by_class[static_cast<std::size_t>(data.label(i))].push_back(i);
  }
  Split split;
  for (auto& rows : by_class) {
    for (std::size_t i = rows.size(); i > 1; --i) {
      std::swap(rows[i - 1], rows[uniform_index(rng, i)]);
    }
    const std::size_t n = rows.size();
    if (n == 0) continue;
    auto take = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    take = std::max<std::size_t>(take, 1);
    if (n >= 2) take = std::min(take, n - 1);
    split.train.insert(split.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
    split.test.insert(split.test.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<InstanceRecord> run_single(const Dataset& data, const ExperimentConfig& cfg,
                                       std::size_t run_index) {
  cfg.validate();
  const std::uint64_t seed = run_seed(cfg.seed, run_index);
  const Split split = stratified_split(data, cfg.train_fraction, seed);
  if (split.test.empty()) throw Error(Errc::EmptySplit, "test split is empty");

  const Dataset train = data.subset(split.train);
  ForestConfig fc;
  fc.trees = cfg.trees;
  fc.max_depth = cfg.max_depth;
  fc.seed = derive_seed(seed, 0x7265'6573'7473ULL);
  fc.oob_likelihood = cfg.oob_likelihood;
  const ForestModel forest = train_forest(train, fc);
  const PosteriorWeights posterior = posterior_from_likelihoods(forest.log_likelihoods);

  std::vector<InstanceRecord> records;
  records.reserve(split.test.size());
  for (std::size_t i : split.test) {
    const EnsembleOutput ens = ensemble_output(forest, data.row(i));
    const ProbVector q = bma_prediction(ens, posterior);
    const auto qv = q.values();

    InstanceRecord rec;
    rec.row = i;
    rec.truth = data.label(i);
    rec.predicted = static_cast<int>(std::max_element(qv.begin(), qv.end()) - qv.begin());

    const LeviMeasures levi = levi_measures(ens, cfg.delta);
    const UncertaintyReport reports[] = {bayes_decomposition(ens, posterior), levi_gh_report(levi),
                                         levi_ent_report(levi)};
    for (const auto& r : reports) {
      for (Measure measure : kAllMeasures) rec.scores[score_index(r.method, measure)] = r.get(measure);
    }
    records.push_back(rec);
  }
  return records;
}

RejectionCurve accuracy_rejection(std::span<const InstanceRecord> records, Method method,
                                  Measure measure, std::span<const double> grid) {
  if (records.empty()) throw Error(Errc::EmptyRecords, "no records to evaluate");
  check_grid(grid);

  const std::size_t n = records.size();
  const std::size_t column = score_index(method, measure);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].scores[column] > records[b].scores[column];
  });

  // correct_suffix[i] = correct predictions among order[i..n)
  std::vector<std::size_t> correct_suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) {
    correct_suffix[i] = correct_suffix[i + 1] + (records[order[i]].correct() ? 1 : 0);
  }

  RejectionCurve curve;
  curve.method = method;
  curve.measure = measure;
  curve.runs = 1;
  for (double p : grid) {
    const auto rejected = std::min(
        n - 1, static_cast<std::size_t>(std::floor(p * static_cast<double>(n) + kFloorSlack)));
    curve.rejection_rates.push_back(p);
    curve.mean_accuracy.push_back(static_cast<double>(correct_suffix[rejected]) /
                                  static_cast<double>(n - rejected));
    curve.std_accuracy.push_back(0.0);
  }
  return curve;
}

RejectionCurve aggregate_runs(std::span<const RejectionCurve> curves) {
  if (curves.empty()) throw Error(Errc::EmptyRecords, "no curves to aggregate");
  const auto& first = curves.front();
  for (const auto& c : curves) {
    if (c.rejection_rates != first.rejection_rates || c.method != first.method ||
        c.measure != first.measure || c.mean_accuracy.size() != first.rejection_rates.size()) {
      throw Error(Errc::GridMismatch, "curves differ in grid, method or measure");
    }
  }
  const std::size_t points = first.rejection_rates.size();
  const double runs = static_cast<double>(curves.size());
  RejectionCurve out;
  out.rejection_rates = first.rejection_rates;
  out.method = first.method;
  out.measure = first.measure;
  out.runs = curves.size();
  out.mean_accuracy.assign(points, 0.0);
  out.std_accuracy.assign(points, 0.0);
  for (std::size_t i = 0; i < points; ++i) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c.mean_accuracy[i];
    const double mean = sum / runs;
    double ss = 0.0;
    for (const auto& c : curves) ss += (c.mean_accuracy[i] - mean) * (c.mean_accuracy[i] - mean);
    out.mean_accuracy[i] = mean;
    out.std_accuracy[i] = curves.size() > 1 ? std::sqrt(ss / (runs - 1.0)) : 0.0;
  }
  return out;
}

ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& cfg,
                                std::size_t threads) {
  cfg.validate();
  const std::size_t runs = cfg.runs;
  std::vector<std::vector<RejectionCurve>> per_run(runs);
  std::vector<InstanceRecord> last_run;

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t r = next++; r < runs; r = next++) {
      try {
        auto records = run_single(data, cfg, r);
        auto& curves = per_run[r];
        for (Method method : kAllMethods) {
          for (Measure measure : kAllMeasures) {
            curves.push_back(accuracy_rejection(records, method, measure, cfg.rejection_grid));
          }
        }
        if (r + 1 == runs) last_run = std::move(records);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = runs;
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, runs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  std::vector<RejectionCurve> series(runs);
  for (std::size_t s = 0; s < kScoreColumns; ++s) {
    for (std::size_t r = 0; r < runs; ++r) series[r] = per_run[r][s];
    result.curves.push_back(aggregate_runs(series));
  }
  result.last_run = std::move(last_run);
  return result;
}

}  // namespace ensuq
