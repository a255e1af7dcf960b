#include "ensuq/dataset.hpp"

#include <cmath>

#include "ensuq/error.hpp"

namespace ensuq {

Dataset::Dataset(std::vector<double> features, std::size_t dims, std::vector<int> labels,
                 std::size_t classes, std::vector<std::string> feature_names,
                 std::vector<std::string> class_names)
    : features_(std::move(features)),
      dims_(dims),
      labels_(std::move(labels)),
      classes_(classes),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)) {
  if (labels_.empty() || dims_ == 0) throw Error(Errc::EmptyDataset, "dataset has no rows or columns");
  if (features_.size() != labels_.size() * dims_) {
    throw Error(Errc::DimensionMismatch, "feature matrix size does not match rows x dims");
  }
  if (!feature_names_.empty() && feature_names_.size() != dims_) {
    throw Error(Errc::DimensionMismatch, "one feature name per column required");
  }
  if (!class_names_.empty() && class_names_.size() != classes_) {
    throw Error(Errc::DimensionMismatch, "one class name per class required");
  }
  for (double x : features_) {
    if (!std::isfinite(x)) throw Error(Errc::NonFiniteValue, "non-finite feature value");
  }
  for (int y : labels_) {
    if (y < 0 || static_cast<std::size_t>(y) >= classes_) {
      throw Error(Errc::InvalidLabel, "label " + std::to_string(y) + " outside [0, K)");
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> features;
  std::vector<int> labels;
  features.reserve(indices.size() * dims_);
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    const auto r = row(i);
    features.insert(features.end(), r.begin(), r.end());
    labels.push_back(labels_[i]);
  }
  return Dataset(std::move(features), dims_, std::move(labels), classes_, feature_names_,
                 class_names_);
}

}  // namespace ensuq
