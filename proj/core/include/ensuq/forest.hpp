#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "ensuq/dataset.hpp"
#include "ensuq/types.hpp"

namespace ensuq {

/// Laplace-corrected leaf estimate (n_k + 1) / (n + K).
std::vector<double> laplace_probs(std::span<const std::uint32_t> counts);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<std::uint32_t> counts;  // leaves only
  std::vector<double> probs;          // leaves only, always laplace_probs(counts)

  bool is_leaf() const noexcept { return feature < 0; }
};

/// Axis-aligned binary tree; x[feature] <= threshold routes left.
class TreeModel {
 public:
  /// Nodes in pre-order with node 0 as root; children must follow their
  /// parent. Leaf probabilities are recomputed from the counts.
  /// Throws Error{MalformedModel}.
  TreeModel(std::vector<TreeNode> nodes, std::size_t classes, std::size_t dims, int max_depth);

  std::size_t classes() const noexcept { return classes_; }
  std::size_t dims() const noexcept { return dims_; }
  int max_depth() const noexcept { return max_depth_; }
  int depth() const noexcept { return depth_; }
  std::span<const TreeNode> nodes() const noexcept { return nodes_; }

  /// Throws Error{FeatureDimensionMismatch}.
  const TreeNode& leaf_for(std::span<const double> x) const;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t classes_;
  std::size_t dims_;
  int max_depth_;
  int depth_ = 0;
};

struct ForestConfig {
  std::size_t trees = 10;
  int max_depth = 10;
  std::uint64_t seed = 0;
  /// Candidate features per split; 0 means ceil(sqrt(d)).
  std::size_t features_per_split = 0;
  /// Evaluate member likelihoods on out-of-bag rows instead of the full training set.
  bool oob_likelihood = false;
};

struct ForestModel {
  std::vector<TreeModel> trees;
  std::vector<double> log_likelihoods;
  ForestConfig config;
  std::size_t classes = 0;
  std::size_t dims = 0;
  /// Training labels covered a single class; every leaf is near-degenerate.
  bool single_class = false;
};

/// Grows one Gini tree on the given rows (repeats allowed, e.g. a bootstrap sample).
TreeModel grow_tree(const Dataset& data, std::span<const std::size_t> rows, int max_depth,
                    std::size_t features_per_split, std::mt19937_64& rng);

/// Bagged Gini trees; tree m draws from derive_seed(config.seed, m).
/// Throws Error{EmptyDataset | TooFewClasses | InvalidConfig}.
ForestModel train_forest(const Dataset& data, const ForestConfig& config);

ProbVector predict_member(const TreeModel& tree, std::span<const double> x);

/// sum_i ln p(y_i | tree, x_i) over all rows of data (or the listed rows).
double likelihood_of_member(const TreeModel& tree, const Dataset& data);
double likelihood_of_member(const TreeModel& tree, const Dataset& data,
                            std::span<const std::size_t> rows);

EnsembleOutput ensemble_output(const ForestModel& forest, std::span<const double> x);

/// Line-oriented text format, version 1:
///
///   ensuq-forest 1
///   classes <K> dims <d> trees <M>
///   config seed <s> max_depth <D> features_per_split <F> oob <0|1>
///   tree <m> max_depth <D> nodes <n> loglik <ll>
///   split <feature> <threshold> <left> <right>
///   leaf <count_0> ... <count_{K-1}>
///
/// One `tree` header per member, followed by its nodes in pre-order. Reals
/// use 17 significant digits so a save/load cycle is exact.
void save_forest(const ForestModel& forest, std::ostream& out);
/// Throws Error{MalformedModel}.
ForestModel load_forest(std::istream& in);

}  // namespace ensuq
