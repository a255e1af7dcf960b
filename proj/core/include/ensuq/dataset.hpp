#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ensuq {

/// Labelled numeric data, stored row-major.
class Dataset {
 public:
  /// Throws Error{EmptyDataset | DimensionMismatch | NonFiniteValue | InvalidLabel}.
  Dataset(std::vector<double> features, std::size_t dims, std::vector<int> labels,
          std::size_t classes, std::vector<std::string> feature_names = {},
          std::vector<std::string> class_names = {});

  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t classes() const noexcept { return classes_; }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * dims_, dims_};
  }
  double at(std::size_t i, std::size_t j) const noexcept { return features_[i * dims_ + j]; }
  int label(std::size_t i) const noexcept { return labels_[i]; }
  std::span<const int> labels() const noexcept { return labels_; }

  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  /// Rows in the given order (repeats allowed); class space is preserved.
  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<double> features_;
  std::size_t dims_;
  std::vector<int> labels_;
  std::size_t classes_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> class_names_;
};

}  // namespace ensuq
