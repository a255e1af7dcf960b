#pragma once

#include <span>

#include "ensuq/types.hpp"

namespace ensuq {

/// Uniform-prior posterior: w_m proportional to exp(ll_m). Shift-invariant.
PosteriorWeights posterior_from_likelihoods(std::span<const double> log_likelihoods);

/// Posterior-weighted average of the member distributions.
ProbVector bma_prediction(const EnsembleOutput& ens, const PosteriorWeights& weights);

/// Shannon entropy in bits with 0 log 0 = 0.
double shannon_entropy(const ProbVector& q);
double shannon_entropy(std::span<const double> q);

/// Entropy-based split: TU is the entropy of the BMA prediction, AU the
/// posterior-expected member entropy, EU their difference (mutual information).
UncertaintyReport bayes_decomposition(const EnsembleOutput& ens, const PosteriorWeights& weights);

/// Same, with weights taken from the ensemble's own log-likelihoods.
UncertaintyReport bayes_decomposition(const EnsembleOutput& ens);

}  // namespace ensuq
