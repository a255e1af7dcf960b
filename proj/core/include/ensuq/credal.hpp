#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ensuq/fractional.hpp"
#include "ensuq/frank_wolfe.hpp"
#include "ensuq/types.hpp"

namespace ensuq {

/// Subsets of the label set {0..K-1} are bitmasks; bit k set means class k.
using Subset = std::uint32_t;

/// Capacities and masses are tabulated over all 2^K subsets.
inline constexpr std::size_t kMaxCredalClasses = 16;

inline constexpr Subset full_set(std::size_t classes) noexcept {
  return static_cast<Subset>((std::uint64_t{1} << classes) - 1);
}

/// Lower probability nu(A) for every subset A, indexed by bitmask.
class Capacity {
 public:
  /// Validates nu(empty) = 0, nu(Y) = 1 and monotonicity, all within 1e-9.
  /// Throws Error{InvalidCapacity | TooManyClasses | DimensionMismatch}.
  Capacity(std::size_t classes, std::vector<double> lower_prob);

  std::size_t classes() const noexcept { return classes_; }
  double operator()(Subset a) const noexcept { return lower_prob_[a]; }
  std::span<const double> values() const noexcept { return lower_prob_; }

 private:
  std::size_t classes_;
  std::vector<double> lower_prob_;
};

/// Moebius masses. May hold small negative entries: the lower envelope of a
/// credal set need not be a belief function.
struct MassAssignment {
  std::size_t classes = 0;
  std::vector<double> mass;
  /// Smallest mass seen (0 when all masses are nonnegative).
  double most_negative = 0.0;
};

/// Vertices of S_delta = { s : 1/(delta M) <= s_m <= delta/M, sum s = 1 }.
/// Throws Error{InvalidDelta}.
std::vector<std::vector<double>> sdelta_vertices(std::size_t members, double delta);

/// The credal set Q as the image of the S_delta vertices under
/// s -> sum_m s_m l_m p_m / sum_m s_m l_m. Coincident images are merged
/// (tolerance 1e-9); non-extreme images are kept.
CredalPolytope credal_set(const EnsembleOutput& ens, double delta);

/// nu_Q(A) = min over s in S_delta of the likelihood-weighted mass of A,
/// solved as a linear-fractional program via Charnes-Cooper.
/// Throws Error{InvalidSubset | InvalidDelta | LpInfeasible}.
double capacity_lfp(const EnsembleOutput& ens, double delta, Subset a);

/// capacity_lfp for every subset (2^K - 2 programs; the two trivial ones are fixed).
Capacity capacities_lfp(const EnsembleOutput& ens, double delta);

/// Lower envelope of an explicit vertex list: nu(A) = min_v v(A).
Capacity lower_envelope(const CredalPolytope& q);

/// m(A) = sum over B subset of A of (-1)^{|A \ B|} nu(B).
/// Throws Error{NormalizationFailure} if the masses do not sum to 1.
MassAssignment mobius_inverse(const Capacity& cap);

/// sum_A m(A) log2 |A|.
double generalized_hartley(const MassAssignment& mass);

/// max over Q of Shannon entropy, by Frank-Wolfe over the vertex hull.
double upper_entropy(const CredalPolytope& q, const FrankWolfeOptions& options = {});

/// min over Q of Shannon entropy; attained at a vertex since entropy is concave.
double lower_entropy(const CredalPolytope& q);

/// The three set-valued measures underlying both disaggregations.
struct LeviMeasures {
  double upper_entropy = 0.0;
  double lower_entropy = 0.0;
  double generalized_hartley = 0.0;
  double most_negative_mass = 0.0;
};

/// Ensemble route: capacities from the fractional programs.
LeviMeasures levi_measures(const EnsembleOutput& ens, double delta);
/// Explicit-polytope route: capacities from the vertex lower envelope.
LeviMeasures levi_measures(const CredalPolytope& q);

/// total = S*, epistemic = GH, aleatoric = S* - GH.
UncertaintyReport levi_gh_report(const LeviMeasures& measures);
/// total = S*, aleatoric = S_*, epistemic = S* - S_*.
UncertaintyReport levi_ent_report(const LeviMeasures& measures);

UncertaintyReport levi_gh_decomposition(const EnsembleOutput& ens, double delta);
UncertaintyReport levi_ent_decomposition(const EnsembleOutput& ens, double delta);

}  // namespace ensuq
