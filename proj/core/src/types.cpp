#include "ensuq/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ensuq/error.hpp"

namespace ensuq {

ProbVector validate_prob_vector(std::span<const double> raw) {
  if (raw.size() < 2) {
    throw Error(Errc::TooFewClasses, "need at least 2 classes, got " + std::to_string(raw.size()));
  }
  std::vector<double> probs(raw.begin(), raw.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    double& p = probs[k];
    if (!std::isfinite(p)) {
      throw Error(Errc::NonFiniteValue, "entry " + std::to_string(k) + " is not finite");
    }
    if (p < -kClampTolerance) {
      throw Error(Errc::NegativeEntry, "entry " + std::to_string(k) + " = " + std::to_string(p));
    }
    p = std::clamp(p, 0.0, 1.0 + kClampTolerance);
    if (p > 1.0) p = 1.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw Error(Errc::SumNotOne, "entries sum to " + std::to_string(sum));
  }
  return ProbVector(std::move(probs));
}

ProbVector ProbVector::from(std::span<const double> raw) { return validate_prob_vector(raw); }

EnsembleOutput::EnsembleOutput(std::vector<ProbVector> members, std::vector<double> log_likelihoods)
    : members_(std::move(members)), log_likelihoods_(std::move(log_likelihoods)) {
  if (members_.empty()) {
    throw Error(Errc::DimensionMismatch, "ensemble output needs at least one member");
  }
  if (members_.size() != log_likelihoods_.size()) {
    throw Error(Errc::DimensionMismatch, "member count " + std::to_string(members_.size()) +
                                             " != likelihood count " +
                                             std::to_string(log_likelihoods_.size()));
  }
  const std::size_t k = members_.front().size();
  for (const auto& p : members_) {
    if (p.size() != k) throw Error(Errc::DimensionMismatch, "members disagree on class count");
  }
  for (double ll : log_likelihoods_) {
    if (!std::isfinite(ll)) throw Error(Errc::NonFiniteLikelihood, "log-likelihood is not finite");
  }
}

std::vector<double> EnsembleOutput::scaled_likelihoods() const {
  const double top = *std::max_element(log_likelihoods_.begin(), log_likelihoods_.end());
  std::vector<double> out(log_likelihoods_.size());
  std::transform(log_likelihoods_.begin(), log_likelihoods_.end(), out.begin(),
                 [top](double ll) { return std::exp(ll - top); });
  return out;
}

PosteriorWeights::PosteriorWeights(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(Errc::DimensionMismatch, "empty weight vector");
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w)) throw Error(Errc::NonFiniteValue, "weight is not finite");
    if (w < 0.0) throw Error(Errc::NegativeEntry, "negative weight " + std::to_string(w));
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw Error(Errc::SumNotOne, "weights sum to " + std::to_string(sum));
  }
}

CredalPolytope::CredalPolytope(std::vector<ProbVector> vertices)
    : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw Error(Errc::DimensionMismatch, "credal set needs a vertex");
  for (const auto& v : vertices_) {
    if (v.size() != vertices_.front().size()) {
      throw Error(Errc::DimensionMismatch, "vertices disagree on class count");
    }
  }
}

CredalPolytope::CredalPolytope(std::vector<ProbVector> vertices, double source_delta,
                               std::vector<std::vector<double>> source_weights)
    : CredalPolytope(std::move(vertices)) {
  if (!(source_delta >= 1.0)) throw Error(Errc::InvalidDelta, "delta must be >= 1");
  if (source_weights.size() != vertices_.size()) {
    throw Error(Errc::DimensionMismatch, "one generating weight vector per vertex required");
  }
  if (source_delta == 1.0 && vertices_.size() != 1) {
    throw Error(Errc::InternalInconsistency, "delta = 1 must yield a single vertex");
  }
  source_delta_ = source_delta;
  source_weights_ = std::move(source_weights);
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Bayes: return "Bayes";
    case Method::LeviGH: return "LeviGH";
    case Method::LeviEnt: return "LeviEnt";
  }
  return "?";
}

std::string_view to_string(Measure measure) noexcept {
  switch (measure) {
    case Measure::EU: return "EU";
    case Measure::AU: return "AU";
    case Measure::TU: return "TU";
  }
  return "?";
}

double UncertaintyReport::get(Measure measure) const noexcept {
  switch (measure) {
    case Measure::EU: return epistemic;
    case Measure::AU: return aleatoric;
    case Measure::TU: return total;
  }
  return total;
}

bool UncertaintyReport::additive(double tol) const noexcept {
  return std::abs(total - (aleatoric + epistemic)) <= tol;
}

}  // namespace ensuq
