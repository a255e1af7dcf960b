#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ensuq {

/// Tolerance on the simplex constraint when validating probability vectors.
inline constexpr double kSimplexTolerance = 1e-9;
/// Entries this close outside [0, 1] are clamped instead of rejected.
inline constexpr double kClampTolerance = 1e-12;

/// A point on the K-class probability simplex, K >= 2.
///
/// Instances only exist in a validated state; construct through
/// validate_prob_vector() or ProbVector::from().
class ProbVector {
 public:
  static ProbVector from(std::span<const double> raw);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t k) const noexcept { return probs_[k]; }
  std::span<const double> values() const noexcept { return probs_; }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  friend ProbVector validate_prob_vector(std::span<const double> raw);
  explicit ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

/// Checks the simplex invariants, clamping entries within 1e-12 of [0, 1].
/// Throws Error{NegativeEntry | SumNotOne | TooFewClasses | NonFiniteValue}.
ProbVector validate_prob_vector(std::span<const double> raw);

/// Per-member class distributions for one query plus member log-likelihoods.
class EnsembleOutput {
 public:
  EnsembleOutput(std::vector<ProbVector> members, std::vector<double> log_likelihoods);

  std::size_t classes() const noexcept { return members_.front().size(); }
  std::size_t members() const noexcept { return members_.size(); }

  const ProbVector& member(std::size_t m) const { return members_.at(m); }
  double prob(std::size_t k, std::size_t m) const { return members_[m][k]; }
  std::span<const ProbVector> member_probs() const noexcept { return members_; }
  std::span<const double> log_likelihoods() const noexcept { return log_likelihoods_; }

  /// exp(ll_m - max_i ll_i); the largest entry is exactly 1.
  std::vector<double> scaled_likelihoods() const;

 private:
  std::vector<ProbVector> members_;
  std::vector<double> log_likelihoods_;
};

/// Posterior distribution over ensemble members.
class PosteriorWeights {
 public:
  explicit PosteriorWeights(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t m) const noexcept { return weights_[m]; }
  std::span<const double> values() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

/// A credal set stored as the list of points whose convex hull it is.
///
/// Points need not all be extreme; they are only guaranteed pairwise
/// distinct within 1e-9 in max-norm.
class CredalPolytope {
 public:
  /// Hand-built polytope with no generating prior family.
  explicit CredalPolytope(std::vector<ProbVector> vertices);
  CredalPolytope(std::vector<ProbVector> vertices, double source_delta,
                 std::vector<std::vector<double>> source_weights);

  std::size_t classes() const noexcept { return vertices_.front().size(); }
  std::span<const ProbVector> vertices() const noexcept { return vertices_; }
  std::optional<double> source_delta() const noexcept { return source_delta_; }
  std::span<const std::vector<double>> source_weights() const noexcept { return source_weights_; }

 private:
  std::vector<ProbVector> vertices_;
  std::optional<double> source_delta_;
  std::vector<std::vector<double>> source_weights_;
};

enum class Method { Bayes, LeviGH, LeviEnt };
enum class Measure { EU, AU, TU };

inline constexpr Method kAllMethods[] = {Method::Bayes, Method::LeviGH, Method::LeviEnt};
inline constexpr Measure kAllMeasures[] = {Measure::EU, Measure::AU, Measure::TU};

std::string_view to_string(Method method) noexcept;
std::string_view to_string(Measure measure) noexcept;

/// Total / aleatoric / epistemic uncertainty in bits.
struct UncertaintyReport {
  double total = 0.0;
  double aleatoric = 0.0;
  double epistemic = 0.0;
  Method method = Method::Bayes;

  double get(Measure measure) const noexcept;
  bool additive(double tol = kSimplexTolerance) const noexcept;
};

}  // namespace ensuq
