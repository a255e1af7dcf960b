#include "ensuq/error.hpp"

namespace ensuq {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::SumNotOne: return "SumNotOne";
    case Errc::TooFewClasses: return "TooFewClasses";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFiniteLikelihood: return "NonFiniteLikelihood";
    case Errc::InternalInconsistency: return "InternalInconsistency";
    case Errc::InvalidDelta: return "InvalidDelta";
    case Errc::InvalidSubset: return "InvalidSubset";
    case Errc::TooManyClasses: return "TooManyClasses";
    case Errc::NormalizationFailure: return "NormalizationFailure";
    case Errc::InvalidCapacity: return "InvalidCapacity";
    case Errc::InvalidProblem: return "InvalidProblem";
    case Errc::LpInfeasible: return "LpInfeasible";
    case Errc::LpUnbounded: return "LpUnbounded";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::InfeasibleBox: return "InfeasibleBox";
    case Errc::TooManyMembers: return "TooManyMembers";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::FeatureDimensionMismatch: return "FeatureDimensionMismatch";
    case Errc::InvalidLabel: return "InvalidLabel";
    case Errc::MalformedModel: return "MalformedModel";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::EmptyRecords: return "EmptyRecords";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::EmptySplit: return "EmptySplit";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::MissingLabelColumn: return "MissingLabelColumn";
    case Errc::NonNumericFeature: return "NonNumericFeature";
    case Errc::EmptyAfterFiltering: return "EmptyAfterFiltering";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace ensuq
