#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ensuq/dataset.hpp"
#include "ensuq/types.hpp"

namespace ensuq {

/// 0%, 5%, ..., 90%.
std::vector<double> default_rejection_grid();

struct ExperimentConfig {
  std::string data_path;
  std::string label_column;
  double train_fraction = 0.7;
  std::size_t runs = 100;
  double delta = 2.0;
  std::size_t trees = 10;
  int max_depth = 10;
  std::vector<double> rejection_grid = default_rejection_grid();
  std::uint64_t seed = 0;
  bool oob_likelihood = false;

  /// Throws Error{InvalidConfig}.
  void validate() const;
};

inline constexpr std::size_t kScoreColumns = 9;

/// Column of a (method, measure) pair in InstanceRecord::scores.
constexpr std::size_t score_index(Method method, Measure measure) noexcept {
  return static_cast<std::size_t>(method) * 3 + static_cast<std::size_t>(measure);
}

struct InstanceRecord {
  std::size_t row = 0;  // index into the full dataset
  int predicted = 0;
  int truth = 0;
  std::array<double, kScoreColumns> scores{};

  bool correct() const noexcept { return predicted == truth; }
  double score(Method method, Measure measure) const noexcept {
    return scores[score_index(method, measure)];
  }
};

struct RejectionCurve {
  std::vector<double> rejection_rates;
  std::vector<double> mean_accuracy;
  std::vector<double> std_accuracy;
  Method method = Method::Bayes;
  Measure measure = Measure::TU;
  std::size_t runs = 1;
};

/// Train/test indices of a class-stratified split.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Each class contributes round(fraction * n_c) rows to training (at least
/// one, and at most n_c - 1 when n_c >= 2); the rest go to test.
Split stratified_split(const Dataset& data, double train_fraction, std::uint64_t seed);

/// Seed of run r: derive_seed(master, r).
std::uint64_t run_seed(std::uint64_t master, std::size_t run_index) noexcept;

/// One train/test repetition scored by all three methods and three measures.
/// Predictions use the BMA argmax (ties to the lowest class index).
std::vector<InstanceRecord> run_single(const Dataset& data, const ExperimentConfig& cfg,
                                       std::size_t run_index);

/// Rejects the floor(p n) most uncertain records (stable on ties) for every p
/// in the grid. Throws Error{EmptyRecords | InvalidConfig}.
RejectionCurve accuracy_rejection(std::span<const InstanceRecord> records, Method method,
                                  Measure measure, std::span<const double> grid);

/// Pointwise mean and sample standard deviation. Throws Error{GridMismatch}.
RejectionCurve aggregate_runs(std::span<const RejectionCurve> curves);

struct ExperimentResult {
  /// One aggregated curve per (method, measure), methods outermost.
  std::vector<RejectionCurve> curves;
  /// Records of the final run.
  std::vector<InstanceRecord> last_run;
};

/// All runs, spread over up to `threads` workers; output does not depend on
/// the thread count.
ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& cfg,
                                std::size_t threads = 1);

}  // namespace ensuq
