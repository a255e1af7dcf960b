#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "ensuq/bayes.hpp"
#include "ensuq/error.hpp"
#include "ensuq/experiment.hpp"
#include "ensuq/forest.hpp"

using namespace ensuq;

namespace {

Dataset gaussians(std::size_t n, double separation, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> x;
  std::vector<int> y;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    x.push_back(noise(rng) + (label ? separation : -separation));
    x.push_back(noise(rng));
    y.push_back(label);
  }
  return Dataset(std::move(x), 2, std::move(y), 2);
}

std::vector<InstanceRecord> records_from(const std::vector<int>& correct, const std::vector<double>& score) {
  std::vector<InstanceRecord> out;
  for (std::size_t i = 0; i < correct.size(); ++i) {
    InstanceRecord r;
    r.row = i;
    r.truth = 1;
    r.predicted = correct[i] ? 1 : 0;
    r.scores.fill(score[i]);
    out.push_back(r);
  }
  return out;
}

ExperimentConfig small_config(std::size_t runs) {
  ExperimentConfig cfg;
  cfg.runs = runs;
  cfg.trees = 5;
  cfg.max_depth = 6;
  cfg.seed = 17;
  return cfg;
}

}  // namespace

TEST(Grid, DefaultHasNineteenPoints) {
  const auto g = default_rejection_grid();
  ASSERT_EQ(g.size(), 19u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_DOUBLE_EQ(g.back(), 0.9);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] - g[i - 1], 0.05, 1e-12);
}

TEST(Config, Validation) {
  ExperimentConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  auto bad = cfg;
  bad.train_fraction = 1.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = cfg;
  bad.runs = 0;
  EXPECT_THROW(bad.validate(), Error);
  bad = cfg;
  bad.delta = 0.99;
  EXPECT_THROW(bad.validate(), Error);
  bad = cfg;
  bad.rejection_grid = {0.0, 0.5, 0.5};
  EXPECT_THROW(bad.validate(), Error);
  bad = cfg;
  bad.rejection_grid = {0.0, 1.0};
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Split, StratifiedDisjointAndDeterministic) {
  const auto data = gaussians(101, 1.0, 1);
  const auto s = stratified_split(data, 0.7, 5);
  EXPECT_EQ(s.train.size() + s.test.size(), data.rows());
  std::set<std::size_t> seen(s.train.begin(), s.train.end());
  for (auto i : s.test) EXPECT_TRUE(seen.insert(i).second);
  std::size_t train_ones = 0;
  for (auto i : s.train) train_ones += static_cast<std::size_t>(data.label(i));
  EXPECT_EQ(train_ones, 35u);              // round(0.7 * 50)
  EXPECT_EQ(s.train.size() - train_ones, 36u);  // round(0.7 * 51)
  const auto again = stratified_split(data, 0.7, 5);
  EXPECT_EQ(again.train, s.train);
  EXPECT_NE(stratified_split(data, 0.7, 6).train, s.train);
}

TEST(Split, SmallClassesKeepBothSides) {
  const Dataset data({0, 1, 2, 3, 4}, 1, {0, 0, 1, 1, 1}, 2);
  const auto s = stratified_split(data, 0.9, 1);
  EXPECT_EQ(s.test.size(), 2u);
  const auto t = stratified_split(data, 0.1, 1);
  EXPECT_EQ(t.train.size(), 2u);
}

TEST(Rejection, EqualScoresGiveSuffixAccuracy) {
  const std::vector<int> correct{1, 0, 1, 1, 0, 1, 1, 1, 0, 1};
  const auto recs = records_from(correct, std::vector<double>(10, 0.5));
  const std::vector<double> grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  const auto c = accuracy_rejection(recs, Method::Bayes, Measure::TU, grid);
  // suffixes from positions 0..5, counted by hand
  const std::vector<double> expect{7.0 / 10, 6.0 / 9, 6.0 / 8, 5.0 / 7, 4.0 / 6, 4.0 / 5};
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_DOUBLE_EQ(c.mean_accuracy[i], expect[i]);
}

TEST(Rejection, PerfectOrdering) {
  std::vector<int> correct(50, 1);
  std::vector<double> score(50, 0.0);
  for (std::size_t i = 0; i < 50; i += 5) {
    correct[i] = 0;
    score[i] = 1.0;
  }
  const auto c = accuracy_rejection(records_from(correct, score), Method::LeviGH, Measure::EU,
                                    default_rejection_grid());
  EXPECT_DOUBLE_EQ(c.mean_accuracy[0], 0.8);
  for (std::size_t i = 0; i < c.rejection_rates.size(); ++i) {
    if (c.rejection_rates[i] >= 0.2 - 1e-12) EXPECT_EQ(c.mean_accuracy[i], 1.0);
  }
}

TEST(Rejection, RandomScoresGiveAFlatCurve) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution right(0.7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> correct;
  std::vector<double> score;
  for (int i = 0; i < 20000; ++i) {
    correct.push_back(right(rng) ? 1 : 0);
    score.push_back(u(rng));
  }
  const auto c = accuracy_rejection(records_from(correct, score), Method::Bayes, Measure::AU,
                                    default_rejection_grid());
  for (double a : c.mean_accuracy) EXPECT_NEAR(a, c.mean_accuracy[0], 0.04);
}

TEST(Rejection, Errors) {
  EXPECT_THROW(accuracy_rejection({}, Method::Bayes, Measure::TU, default_rejection_grid()), Error);
  const auto recs = records_from({1}, {0.0});
  EXPECT_THROW(accuracy_rejection(recs, Method::Bayes, Measure::TU, std::vector{0.5, 0.2}), Error);
}

TEST(Aggregate, SampleStatistics) {
  RejectionCurve a{{0.0, 0.5}, {0.8, 1.0}, {0.0, 0.0}, Method::Bayes, Measure::TU, 1};
  RejectionCurve b{{0.0, 0.5}, {0.9, 1.0}, {0.0, 0.0}, Method::Bayes, Measure::TU, 1};
  const auto one = aggregate_runs(std::vector{a});
  EXPECT_EQ(one.mean_accuracy, a.mean_accuracy);
  EXPECT_EQ(one.std_accuracy, (std::vector<double>{0.0, 0.0}));
  const auto same = aggregate_runs(std::vector{a, a});
  EXPECT_EQ(same.mean_accuracy, a.mean_accuracy);
  EXPECT_EQ(same.std_accuracy[0], 0.0);
  const auto two = aggregate_runs(std::vector{a, b});
  EXPECT_NEAR(two.mean_accuracy[0], 0.85, 1e-15);
  EXPECT_NEAR(two.std_accuracy[0], std::sqrt(0.005), 1e-15);
  EXPECT_NEAR(two.std_accuracy[0], 0.0707, 1e-4);
  EXPECT_EQ(two.runs, 2u);

  auto c = b;
  c.rejection_rates[1] = 0.4;
  EXPECT_THROW(aggregate_runs(std::vector{a, c}), Error);
  auto d = b;
  d.measure = Measure::AU;
  EXPECT_THROW(aggregate_runs(std::vector{a, d}), Error);
  EXPECT_THROW(aggregate_runs(std::vector<RejectionCurve>{}), Error);
}

TEST(RunSingle, SingleClassDataIsAlwaysRight) {
  std::vector<double> x;
  for (int i = 0; i < 20; ++i) x.push_back(i * 0.1);
  const Dataset data(x, 1, std::vector<int>(20, 0), 2);
  const auto recs = run_single(data, small_config(1), 0);
  const auto c = accuracy_rejection(recs, Method::Bayes, Measure::TU, default_rejection_grid());
  for (double a : c.mean_accuracy) EXPECT_EQ(a, 1.0);
}

TEST(RunSingle, DeterministicAndFinite) {
  const auto data = gaussians(80, 1.0, 2);
  const auto a = run_single(data, small_config(1), 3);
  const auto b = run_single(data, small_config(1), 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].row, b[i].row);
    EXPECT_EQ(a[i].predicted, b[i].predicted);
    EXPECT_EQ(a[i].scores, b[i].scores);
    for (double s : a[i].scores) EXPECT_TRUE(std::isfinite(s));
  }
  const auto other = run_single(data, small_config(1), 4);
  bool differs = other.size() != a.size();
  for (std::size_t i = 0; !differs && i < a.size(); ++i) differs = a[i].row != other[i].row;
  EXPECT_TRUE(differs);
}

TEST(RunSingle, BoundaryInstancesAreMoreUncertain) {
  const auto data = gaussians(100, 2.0, 7);
  ForestConfig fc;
  fc.seed = 11;
  const auto forest = train_forest(data, fc);
  const auto w = posterior_from_likelihoods(forest.log_likelihoods);
  std::vector<double> near, far;
  for (double y = -1.0; y <= 1.0; y += 0.25) {
    for (double x = -0.3; x <= 0.3; x += 0.1) {
      near.push_back(bayes_decomposition(ensemble_output(forest, std::vector{x, y}), w).total);
    }
    for (double x : {-4.5, -4.0, 4.0, 4.5}) {
      far.push_back(bayes_decomposition(ensemble_output(forest, std::vector{x, y}), w).total);
    }
  }
  std::sort(far.begin(), far.end());
  const double far_median = far[far.size() / 2];
  double near_mean = 0.0;
  for (double t : near) near_mean += t;
  near_mean /= static_cast<double>(near.size());
  EXPECT_GT(near_mean, far_median);
}

TEST(Experiment, CurvesShapeAndZeroRejectionAccuracy) {
  const auto data = gaussians(90, 1.0, 3);
  auto cfg = small_config(3);
  const auto result = run_experiment(data, cfg, 1);
  ASSERT_EQ(result.curves.size(), kScoreColumns);
  for (std::size_t i = 0; i < kScoreColumns; ++i) {
    const auto& c = result.curves[i];
    EXPECT_EQ(score_index(c.method, c.measure), i);
    EXPECT_EQ(c.runs, 3u);
    EXPECT_EQ(c.mean_accuracy.size(), 19u);
    for (double a : c.mean_accuracy) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
    }
  }
  // with no abstention every ordering retains the same predictions
  double raw = 0.0;
  for (std::size_t r = 0; r < 3; ++r) {
    const auto recs = run_single(data, cfg, r);
    double right = 0.0;
    for (const auto& rec : recs) right += rec.correct() ? 1.0 : 0.0;
    raw += right / static_cast<double>(recs.size());
  }
  raw /= 3.0;
  for (const auto& c : result.curves) EXPECT_NEAR(c.mean_accuracy[0], raw, 1e-15);
}

TEST(Experiment, ThreadCountDoesNotChangeResults) {
  const auto data = gaussians(90, 1.0, 4);
  const auto cfg = small_config(5);
  const auto a = run_experiment(data, cfg, 1);
  const auto b = run_experiment(data, cfg, 4);
  for (std::size_t i = 0; i < kScoreColumns; ++i) {
    EXPECT_EQ(a.curves[i].mean_accuracy, b.curves[i].mean_accuracy);
    EXPECT_EQ(a.curves[i].std_accuracy, b.curves[i].std_accuracy);
  }
  ASSERT_EQ(a.last_run.size(), b.last_run.size());
  for (std::size_t i = 0; i < a.last_run.size(); ++i) EXPECT_EQ(a.last_run[i].scores, b.last_run[i].scores);
}
