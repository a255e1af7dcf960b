#include "ensuq/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "ensuq/error.hpp"
#include "ensuq/random.hpp"

namespace ensuq {

namespace {

constexpr double kMinGiniGain = 1e-12;

double gini(std::span<const std::uint32_t> counts, double n) {
  if (n <= 0.0) return 0.0;
  double sq = 0.0;
  for (std::uint32_t c : counts) {
    const double p = c / n;
    sq += p * p;
  }
  return 1.0 - sq;
}

class TreeGrower {
 public:
  TreeGrower(const Dataset& data, int max_depth, std::size_t features_per_split,
             std::mt19937_64& rng)
      : data_(data),
        max_depth_(max_depth),
        mtry_(std::clamp<std::size_t>(features_per_split, 1, data.dims())),
        rng_(rng) {
    feature_pool_.resize(data.dims());
  }

  std::vector<TreeNode> grow(std::vector<std::size_t> rows) {
    nodes_.clear();
    build(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;
  };

  int build(std::vector<std::size_t> rows, int depth) {
    const auto index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    std::vector<std::uint32_t> counts(data_.classes(), 0);
    for (std::size_t r : rows) ++counts[static_cast<std::size_t>(data_.label(r))];
    const bool pure =
        std::count_if(counts.begin(), counts.end(), [](std::uint32_t c) { return c > 0; }) <= 1;

    Split split;
    if (!pure && depth < max_depth_ && rows.size() >= 2) split = best_split(rows, counts);
    if (split.feature < 0) {
      nodes_[index].counts = std::move(counts);
      nodes_[index].probs = laplace_probs(nodes_[index].counts);
      return index;
    }

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) {
      (data_.at(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    nodes_[index].feature = split.feature;
    nodes_[index].threshold = split.threshold;
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    nodes_[index].left = l;
    nodes_[index].right = r;
    return index;
  }

  std::vector<std::size_t> draw_features() {
    std::iota(feature_pool_.begin(), feature_pool_.end(), std::size_t{0});
    for (std::size_t i = 0; i < mtry_; ++i) {
      const std::size_t j = i + uniform_index(rng_, feature_pool_.size() - i);
      std::swap(feature_pool_[i], feature_pool_[j]);
    }
    std::vector<std::size_t> chosen(feature_pool_.begin(),
                                    feature_pool_.begin() + static_cast<std::ptrdiff_t>(mtry_));
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  // Lowest weighted child Gini; ties keep the lower feature, then the lower threshold.
  Split best_split(const std::vector<std::size_t>& rows, const std::vector<std::uint32_t>& counts) {
    const double n = static_cast<double>(rows.size());
    const double parent = gini(counts, n);
    Split best;
    best.impurity = parent - kMinGiniGain;

    std::vector<std::pair<double, int>> column(rows.size());
    std::vector<std::uint32_t> left(counts.size());
    std::vector<std::uint32_t> right(counts.size());
    for (std::size_t f : draw_features()) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        column[i] = {data_.at(rows[i], f), data_.label(rows[i])};
      }
      std::sort(column.begin(), column.end());
      std::fill(left.begin(), left.end(), 0u);
      right = counts;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        const auto y = static_cast<std::size_t>(column[i].second);
        ++left[y];
        --right[y];
        const double a = column[i].first;
        const double b = column[i + 1].first;
        if (!(b > a)) continue;
        const double nl = static_cast<double>(i + 1);
        const double nr = n - nl;
        const double impurity = (nl * gini(left, nl) + nr * gini(right, nr)) / n;
        if (impurity < best.impurity - kMinGiniGain ||
            (best.feature < 0 && impurity < best.impurity)) {
          double threshold = a + (b - a) / 2.0;
          if (threshold >= b) threshold = a;
          best = {static_cast<int>(f), threshold, impurity};
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  int max_depth_;
  std::size_t mtry_;
  std::mt19937_64& rng_;
  std::vector<std::size_t> feature_pool_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

std::vector<double> laplace_probs(std::span<const std::uint32_t> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double denom = total + static_cast<double>(counts.size());
  std::vector<double> p(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) p[k] = (counts[k] + 1.0) / denom;
  return p;
}

TreeModel::TreeModel(std::vector<TreeNode> nodes, std::size_t classes, std::size_t dims,
                     int max_depth)
    : nodes_(std::move(nodes)), classes_(classes), dims_(dims), max_depth_(max_depth) {
  if (nodes_.empty()) throw Error(Errc::MalformedModel, "tree has no nodes");
  if (classes_ < 2) throw Error(Errc::MalformedModel, "tree needs at least 2 classes");
  if (max_depth_ < 0) throw Error(Errc::MalformedModel, "negative depth cap");
  const auto count = static_cast<int>(nodes_.size());
  std::vector<int> depth(nodes_.size(), -1);
  depth[0] = 0;
  for (int i = 0; i < count; ++i) {
    auto& node = nodes_[static_cast<std::size_t>(i)];
    if (depth[static_cast<std::size_t>(i)] < 0) {
      throw Error(Errc::MalformedModel, "node " + std::to_string(i) + " is unreachable");
    }
    if (node.is_leaf()) {
      if (node.counts.size() != classes_) {
        throw Error(Errc::MalformedModel, "leaf " + std::to_string(i) + " has wrong count length");
      }
      node.probs = laplace_probs(node.counts);
      depth_ = std::max(depth_, depth[static_cast<std::size_t>(i)]);
      continue;
    }
    if (static_cast<std::size_t>(node.feature) >= dims_ || !std::isfinite(node.threshold)) {
      throw Error(Errc::MalformedModel, "node " + std::to_string(i) + " has a bad split");
    }
    for (int child : {node.left, node.right}) {
      if (child <= i || child >= count || depth[static_cast<std::size_t>(child)] >= 0) {
        throw Error(Errc::MalformedModel, "node " + std::to_string(i) + " has a bad child index");
      }
      depth[static_cast<std::size_t>(child)] = depth[static_cast<std::size_t>(i)] + 1;
    }
    node.counts.clear();
    node.probs.clear();
  }
  if (depth_ > max_depth_) {
    throw Error(Errc::MalformedModel, "tree depth " + std::to_string(depth_) + " exceeds cap " +
                                          std::to_string(max_depth_));
  }
}

const TreeNode& TreeModel::leaf_for(std::span<const double> x) const {
  if (x.size() != dims_) {
    throw Error(Errc::FeatureDimensionMismatch, "expected " + std::to_string(dims_) +
                                                    " features, got " + std::to_string(x.size()));
  }
  const TreeNode* node = &nodes_[0];
  while (!node->is_leaf()) {
    const int next = x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                                    : node->right;
    node = &nodes_[static_cast<std::size_t>(next)];
  }
  return *node;
}

TreeModel grow_tree(const Dataset& data, std::span<const std::size_t> rows, int max_depth,
                    std::size_t features_per_split, std::mt19937_64& rng) {
  if (rows.empty()) throw Error(Errc::EmptyDataset, "cannot grow a tree on zero rows");
  TreeGrower grower(data, max_depth, features_per_split, rng);
  return TreeModel(grower.grow({rows.begin(), rows.end()}), data.classes(), data.dims(), max_depth);
}

ForestModel train_forest(const Dataset& data, const ForestConfig& config) {
  if (data.classes() < 2) {
    throw Error(Errc::TooFewClasses, "classification needs at least 2 classes");
  }
  if (config.trees == 0 || config.max_depth < 1) {
    throw Error(Errc::InvalidConfig, "need at least one tree and max_depth >= 1");
  }
  const std::size_t n = data.rows();
  const std::size_t mtry =
      config.features_per_split > 0
          ? config.features_per_split
          : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(data.dims()))));

  ForestModel forest;
  forest.config = config;
  forest.classes = data.classes();
  forest.dims = data.dims();
  const auto labels = data.labels();
  forest.single_class =
      std::all_of(labels.begin(), labels.end(), [&](int y) { return y == labels.front(); });

  std::vector<std::size_t> sample(n);
  std::vector<bool> in_bag(n);
  for (std::size_t m = 0; m < config.trees; ++m) {
    std::mt19937_64 rng(derive_seed(config.seed, m));
    std::fill(in_bag.begin(), in_bag.end(), false);
    for (auto& r : sample) {
      r = uniform_index(rng, n);
      in_bag[r] = true;
    }
    TreeModel tree = grow_tree(data, sample, config.max_depth, mtry, rng);

    double ll;
    std::vector<std::size_t> oob;
    if (config.oob_likelihood) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!in_bag[i]) oob.push_back(i);
      }
    }
    ll = oob.empty() ? likelihood_of_member(tree, data) : likelihood_of_member(tree, data, oob);
    forest.trees.push_back(std::move(tree));
    forest.log_likelihoods.push_back(ll);
  }
  return forest;
}

ProbVector predict_member(const TreeModel& tree, std::span<const double> x) {
  return ProbVector::from(tree.leaf_for(x).probs);
}

double likelihood_of_member(const TreeModel& tree, const Dataset& data,
                            std::span<const std::size_t> rows) {
  if (data.classes() != tree.classes()) {
    throw Error(Errc::DimensionMismatch, "tree and dataset disagree on class count");
  }
  double ll = 0.0;
  for (std::size_t i : rows) {
    ll += std::log(tree.leaf_for(data.row(i)).probs[static_cast<std::size_t>(data.label(i))]);
  }
  return ll;
}

double likelihood_of_member(const TreeModel& tree, const Dataset& data) {
  std::vector<std::size_t> all(data.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return likelihood_of_member(tree, data, all);
}

EnsembleOutput ensemble_output(const ForestModel& forest, std::span<const double> x) {
  std::vector<ProbVector> members;
  members.reserve(forest.trees.size());
  for (const auto& tree : forest.trees) members.push_back(predict_member(tree, x));
  return EnsembleOutput(std::move(members), forest.log_likelihoods);
}

}  // namespace ensuq
