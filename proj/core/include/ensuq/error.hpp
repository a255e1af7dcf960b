#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ensuq {

enum class Errc {
  // core types
  NegativeEntry,
  SumNotOne,
  TooFewClasses,
  NonFiniteValue,
  DimensionMismatch,
  // bayes
  NonFiniteLikelihood,
  InternalInconsistency,
  // credal
  InvalidDelta,
  InvalidSubset,
  TooManyClasses,
  NormalizationFailure,
  InvalidCapacity,
  // optim
  InvalidProblem,
  LpInfeasible,
  LpUnbounded,
  CycleDetected,
  DegenerateDenominator,
  ConvergenceFailure,
  InfeasibleBox,
  TooManyMembers,
  // ensemble
  EmptyDataset,
  FeatureDimensionMismatch,
  InvalidLabel,
  MalformedModel,
  // eval harness
  InvalidConfig,
  EmptyRecords,
  GridMismatch,
  EmptySplit,
  // cli / io
  FileNotFound,
  MissingLabelColumn,
  NonNumericFeature,
  EmptyAfterFiltering,
  IoFailure,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ensuq
