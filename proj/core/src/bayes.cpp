#include "ensuq/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ensuq/error.hpp"

namespace ensuq {

namespace {

// Floating-point slack below zero tolerated for EU before it is an error.
constexpr double kNegativeEpistemicSlack = 1e-9;

void check_weights(const EnsembleOutput& ens, const PosteriorWeights& weights) {
  if (weights.size() != ens.members()) {
    throw Error(Errc::DimensionMismatch, "ensemble has " + std::to_string(ens.members()) +
                                             " members but " + std::to_string(weights.size()) +
                                             " weights were given");
  }
}

}  // namespace

PosteriorWeights posterior_from_likelihoods(std::span<const double> log_likelihoods) {
  if (log_likelihoods.empty()) throw Error(Errc::DimensionMismatch, "no log-likelihoods");
  for (double ll : log_likelihoods) {
    if (!std::isfinite(ll)) throw Error(Errc::NonFiniteLikelihood, "log-likelihood is not finite");
  }
  const double top = *std::max_element(log_likelihoods.begin(), log_likelihoods.end());
  std::vector<double> w(log_likelihoods.size());
  double sum = 0.0;
  for (std::size_t m = 0; m < w.size(); ++m) {
    w[m] = std::exp(log_likelihoods[m] - top);
    sum += w[m];
  }
  for (double& x : w) x /= sum;
  return PosteriorWeights(std::move(w));
}

ProbVector bma_prediction(const EnsembleOutput& ens, const PosteriorWeights& weights) {
  check_weights(ens, weights);
  std::vector<double> q(ens.classes(), 0.0);
  for (std::size_t m = 0; m < ens.members(); ++m) {
    const auto p = ens.member(m).values();
    for (std::size_t k = 0; k < q.size(); ++k) q[k] += weights[m] * p[k];
  }
  return validate_prob_vector(q);
}

double shannon_entropy(std::span<const double> q) {
  double s = 0.0;
  for (double p : q) {
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

double shannon_entropy(const ProbVector& q) { return shannon_entropy(q.values()); }

UncertaintyReport bayes_decomposition(const EnsembleOutput& ens, const PosteriorWeights& weights) {
  check_weights(ens, weights);
  double aleatoric = 0.0;
  for (std::size_t m = 0; m < ens.members(); ++m) {
    aleatoric += weights[m] * shannon_entropy(ens.member(m));
  }
  const double total = shannon_entropy(bma_prediction(ens, weights));
  double epistemic = total - aleatoric;
  if (epistemic < 0.0) {
    if (epistemic < -kNegativeEpistemicSlack) {
      throw Error(Errc::InternalInconsistency,
                  "negative mutual information " + std::to_string(epistemic));
    }
    epistemic = 0.0;
    aleatoric = total;
  }
  return {total, aleatoric, epistemic, Method::Bayes};
}

UncertaintyReport bayes_decomposition(const EnsembleOutput& ens) {
  return bayes_decomposition(ens, posterior_from_likelihoods(ens.log_likelihoods()));
}

}  // namespace ensuq
