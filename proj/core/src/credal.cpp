#include "ensuq/credal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ensuq/bayes.hpp"
#include "ensuq/box_simplex.hpp"
#include "ensuq/error.hpp"

namespace ensuq {

namespace {

constexpr double kCapacityTolerance = 1e-9;
constexpr double kMergeTolerance = 1e-9;
constexpr double kNegativeAleatoricSlack = 1e-9;

void check_delta(double delta) {
  if (!(delta >= 1.0) || !std::isfinite(delta)) {
    throw Error(Errc::InvalidDelta, "delta must be finite and >= 1, got " + std::to_string(delta));
  }
}

void check_class_count(std::size_t classes) {
  if (classes > kMaxCredalClasses) {
    throw Error(Errc::TooManyClasses, "subset tables are limited to " +
                                          std::to_string(kMaxCredalClasses) + " classes");
  }
}

// Mass that a probability vector puts on every subset, indexed by bitmask.
std::vector<double> subset_sums(std::span<const double> p) {
  const std::size_t n = std::size_t{1} << p.size();
  std::vector<double> sums(n, 0.0);
  for (std::size_t a = 1; a < n; ++a) {
    const auto low = static_cast<std::size_t>(std::countr_zero(a));
    sums[a] = sums[a & (a - 1)] + p[low];
  }
  return sums;
}

}  // namespace

Capacity::Capacity(std::size_t classes, std::vector<double> lower_prob)
    : classes_(classes), lower_prob_(std::move(lower_prob)) {
  check_class_count(classes_);
  const std::size_t n = std::size_t{1} << classes_;
  if (lower_prob_.size() != n) {
    throw Error(Errc::DimensionMismatch, "capacity table needs 2^K entries");
  }
  if (std::abs(lower_prob_[0]) > kCapacityTolerance ||
      std::abs(lower_prob_[n - 1] - 1.0) > kCapacityTolerance) {
    throw Error(Errc::InvalidCapacity, "capacity must vanish on the empty set and be 1 on Y");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (!std::isfinite(lower_prob_[a])) throw Error(Errc::InvalidCapacity, "non-finite capacity");
    for (std::size_t k = 0; k < classes_; ++k) {
      const std::size_t b = a | (std::size_t{1} << k);
      if (b != a && lower_prob_[a] > lower_prob_[b] + kCapacityTolerance) {
        throw Error(Errc::InvalidCapacity, "capacity is not monotone at subset " +
                                               std::to_string(a) + " -> " + std::to_string(b));
      }
    }
  }
}

std::vector<std::vector<double>> sdelta_vertices(std::size_t members, double delta) {
  check_delta(delta);
  const double m = static_cast<double>(members);
  return box_simplex_vertices(members, 1.0 / (delta * m), delta / m);
}

CredalPolytope credal_set(const EnsembleOutput& ens, double delta) {
  const auto weights = sdelta_vertices(ens.members(), delta);
  const auto lik = ens.scaled_likelihoods();
  const std::size_t k_count = ens.classes();

  std::vector<std::vector<double>> images;
  images.reserve(weights.size());
  for (const auto& s : weights) {
    std::vector<double> q(k_count, 0.0);
    double den = 0.0;
    for (std::size_t m = 0; m < ens.members(); ++m) {
      const double u = s[m] * lik[m];
      den += u;
      const auto p = ens.member(m).values();
      for (std::size_t k = 0; k < k_count; ++k) q[k] += u * p[k];
    }
    double sum = 0.0;
    for (double& x : q) {
      x /= den;
      sum += x;
    }
    for (double& x : q) x /= sum;
    images.push_back(std::move(q));
  }

  std::vector<std::size_t> order(images.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return images[a] < images[b]; });

  // Lexicographic order puts near-coincident points within a band of the
  // first coordinate, so scanning kept points back through that band finds them.
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    const auto& q = images[idx];
    bool duplicate = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      const auto& r = images[*it];
      if (q[0] - r[0] > kMergeTolerance) break;
      bool close = true;
      for (std::size_t k = 0; k < k_count && close; ++k) {
        close = std::abs(q[k] - r[k]) <= kMergeTolerance;
      }
      if (close) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(idx);
  }

  std::vector<ProbVector> vertices;
  std::vector<std::vector<double>> sources;
  vertices.reserve(kept.size());
  sources.reserve(kept.size());
  for (std::size_t idx : kept) {
    vertices.push_back(validate_prob_vector(images[idx]));
    sources.push_back(weights[idx]);
  }
  return CredalPolytope(std::move(vertices), delta, std::move(sources));
}

double capacity_lfp(const EnsembleOutput& ens, double delta, Subset a) {
  check_delta(delta);
  const std::size_t k_count = ens.classes();
  if (k_count >= 32 || a > full_set(k_count)) {
    throw Error(Errc::InvalidSubset, "subset " + std::to_string(a) + " is outside the label set");
  }
  if (a == 0) return 0.0;
  if (a == full_set(k_count)) return 1.0;

  const auto lik = ens.scaled_likelihoods();
  FractionalProgram fp;
  fp.delta = delta;
  fp.denominator = lik;
  fp.numerator.resize(ens.members());
  for (std::size_t m = 0; m < ens.members(); ++m) {
    double mass = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      if ((a >> k) & 1u) mass += ens.prob(k, m);
    }
    fp.numerator[m] = lik[m] * mass;
  }
  return std::clamp(solve_fractional(fp).value, 0.0, 1.0);
}

Capacity capacities_lfp(const EnsembleOutput& ens, double delta) {
  const std::size_t k_count = ens.classes();
  check_class_count(k_count);
  const Subset full = full_set(k_count);
  std::vector<double> nu(std::size_t{full} + 1, 0.0);
  nu[full] = 1.0;
  for (Subset a = 1; a < full; ++a) nu[a] = capacity_lfp(ens, delta, a);
  return Capacity(k_count, std::move(nu));
}

Capacity lower_envelope(const CredalPolytope& q) {
  const std::size_t k_count = q.classes();
  check_class_count(k_count);
  const std::size_t n = std::size_t{1} << k_count;
  std::vector<double> nu(n, std::numeric_limits<double>::infinity());
  for (const auto& v : q.vertices()) {
    const auto sums = subset_sums(v.values());
    for (std::size_t a = 0; a < n; ++a) nu[a] = std::min(nu[a], sums[a]);
  }
  nu[0] = 0.0;
  nu[n - 1] = 1.0;
  for (double& x : nu) x = std::clamp(x, 0.0, 1.0);
  return Capacity(k_count, std::move(nu));
}

MassAssignment mobius_inverse(const Capacity& cap) {
  const std::size_t k_count = cap.classes();
  const std::size_t n = std::size_t{1} << k_count;
  MassAssignment out;
  out.classes = k_count;
  out.mass.assign(n, 0.0);
  double total = 0.0;
  for (std::size_t a = 1; a < n; ++a) {
    double m = 0.0;
    // all submasks b of a, including the empty set
    for (std::size_t b = a;; b = (b - 1) & a) {
      const int parity = std::popcount(a & ~b) & 1;
      m += parity ? -cap(static_cast<Subset>(b)) : cap(static_cast<Subset>(b));
      if (b == 0) break;
    }
    out.mass[a] = m;
    total += m;
    out.most_negative = std::min(out.most_negative, m);
  }
  if (std::abs(total - 1.0) > kCapacityTolerance) {
    throw Error(Errc::NormalizationFailure, "Moebius masses sum to " + std::to_string(total));
  }
  return out;
}

double generalized_hartley(const MassAssignment& mass) {
  double gh = 0.0;
  for (std::size_t a = 1; a < mass.mass.size(); ++a) {
    const int size = std::popcount(a);
    if (size > 1) gh += mass.mass[a] * std::log2(static_cast<double>(size));
  }
  return gh;
}

double upper_entropy(const CredalPolytope& q, const FrankWolfeOptions& options) {
  std::vector<std::vector<double>> points;
  points.reserve(q.vertices().size());
  for (const auto& v : q.vertices()) points.emplace_back(v.values().begin(), v.values().end());
  return frank_wolfe_max(points, entropy_objective(), options).value;
}

double lower_entropy(const CredalPolytope& q) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : q.vertices()) best = std::min(best, shannon_entropy(v));
  return best;
}

LeviMeasures levi_measures(const EnsembleOutput& ens, double delta) {
  const CredalPolytope q = credal_set(ens, delta);
  const MassAssignment mass = mobius_inverse(capacities_lfp(ens, delta));
  LeviMeasures out;
  out.upper_entropy = upper_entropy(q);
  out.lower_entropy = lower_entropy(q);
  out.generalized_hartley = generalized_hartley(mass);
  out.most_negative_mass = mass.most_negative;
  return out;
}

LeviMeasures levi_measures(const CredalPolytope& q) {
  const MassAssignment mass = mobius_inverse(lower_envelope(q));
  LeviMeasures out;
  out.upper_entropy = upper_entropy(q);
  out.lower_entropy = lower_entropy(q);
  out.generalized_hartley = generalized_hartley(mass);
  out.most_negative_mass = mass.most_negative;
  return out;
}

UncertaintyReport levi_gh_report(const LeviMeasures& measures) {
  UncertaintyReport r;
  r.method = Method::LeviGH;
  r.total = measures.upper_entropy;
  r.epistemic = measures.generalized_hartley;
  r.aleatoric = r.total - r.epistemic;
  if (r.aleatoric < 0.0 && r.aleatoric >= -kNegativeAleatoricSlack) {
    r.aleatoric = 0.0;
    r.epistemic = r.total;
  }
  return r;
}

UncertaintyReport levi_ent_report(const LeviMeasures& measures) {
  UncertaintyReport r;
  r.method = Method::LeviEnt;
  r.total = measures.upper_entropy;
  r.aleatoric = std::min(measures.lower_entropy, r.total);
  r.epistemic = r.total - r.aleatoric;
  return r;
}

UncertaintyReport levi_gh_decomposition(const EnsembleOutput& ens, double delta) {
  return levi_gh_report(levi_measures(ens, delta));
}

UncertaintyReport levi_ent_decomposition(const EnsembleOutput& ens, double delta) {
  return levi_ent_report(levi_measures(ens, delta));
}

}  // namespace ensuq
