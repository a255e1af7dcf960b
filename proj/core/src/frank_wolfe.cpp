#include "ensuq/frank_wolfe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ensuq/bayes.hpp"
#include "ensuq/error.hpp"

namespace ensuq {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Largest gamma in [0, gamma_max] maximizing f(x + gamma d), found by
// bisection on the (decreasing) directional derivative.
double exact_line_search(const ConcaveObjective& f, std::span<const double> x,
                         std::span<const double> d, double gamma_max, double tol) {
  const std::size_t k = x.size();
  std::vector<double> point(k);
  std::vector<double> grad(k);
  auto slope = [&](double gamma) {
    for (std::size_t i = 0; i < k; ++i) point[i] = x[i] + gamma * d[i];
    f.gradient(point, grad);
    return dot(grad, d);
  };
  if (slope(gamma_max) >= 0.0) return gamma_max;
  if (slope(0.0) <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = gamma_max;
  const double width = tol * std::max(1.0, gamma_max);
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Solves the dense n x n system a z = b in place (b becomes z) by Gaussian
// elimination with partial pivoting. False if the matrix is singular.
bool solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r * n + c]) > std::fabs(a[pivot * n + c])) pivot = r;
    }
    if (!(std::fabs(a[pivot * n + c]) > 0.0)) return false;
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[pivot * n + j]);
      std::swap(b[c], b[pivot]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double factor = a[r * n + c] / a[c * n + c];
      if (factor == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) a[r * n + j] -= factor * a[c * n + j];
      b[r] -= factor * b[c];
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t j = c + 1; j < n; ++j) s -= a[c * n + j] * b[j];
    b[c] = s / a[c * n + c];
  }
  return true;
}

struct ActiveSet {
  const std::vector<std::vector<double>>& vertices;
  std::vector<double>& alpha;
  std::vector<std::size_t>& active;
  std::vector<double>& x;

  // Drops non-positive weights and rebuilds x from the rest.
  void rebuild() {
    active.clear();
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] <= 0.0) {
        alpha[i] = 0.0;
        continue;
      }
      active.push_back(i);
      for (std::size_t k = 0; k < x.size(); ++k) x[k] += alpha[i] * vertices[i][k];
    }
  }
};

constexpr int kNewtonRounds = 50;

// Newton ascent on the weights of the active vertices, restricted to the
// simplex face they span. A weight driven to zero leaves the active set.
void newton_correct(ActiveSet& set, const ConcaveObjective& f, double line_tol) {
  const std::size_t dim = set.x.size();
  std::vector<double> grad(dim), hess(dim * dim), hv, dir(dim);
  for (int round = 0; round < kNewtonRounds; ++round) {
    const std::size_t n = set.active.size();
    if (n < 2) return;
    f.gradient(set.x, grad);
    f.hessian(set.x, hess);

    std::vector<double> g(n);
    hv.assign(n * dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = set.vertices[set.active[i]];
      g[i] = dot(grad, v);
      for (std::size_t r = 0; r < dim; ++r) hv[i * dim + r] = dot({hess.data() + r * dim, dim}, v);
    }
    // KKT system of the quadratic model on {sum d = 0}:
    // [-H + ridge, 1; 1', 0] [d; mu] = [g; 0]
    const std::size_t m = n + 1;
    std::vector<double> kkt(m * m, 0.0), rhs(m, 0.0);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        kkt[i * m + j] = -dot({hv.data() + i * dim, dim}, set.vertices[set.active[j]]);
      }
      scale = std::max(scale, std::fabs(kkt[i * m + i]));
      kkt[i * m + n] = 1.0;
      kkt[n * m + i] = 1.0;
      rhs[i] = g[i];
    }
    const double ridge = 1e-12 * std::max(1.0, scale);
    for (std::size_t i = 0; i < n; ++i) kkt[i * m + i] += ridge;
    if (!solve_dense(kkt, rhs, m)) return;

    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += g[i] * rhs[i];
    if (!(slope > 1e-15)) return;

    double step_max = 2.0;
    std::size_t blocking = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (rhs[i] < 0.0 && set.alpha[set.active[i]] < -rhs[i] * step_max) {
        step_max = set.alpha[set.active[i]] / -rhs[i];
        blocking = i;
      }
    }
    std::fill(dir.begin(), dir.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = set.vertices[set.active[i]];
      for (std::size_t k = 0; k < dim; ++k) dir[k] += rhs[i] * v[k];
    }
    const double gamma = exact_line_search(f, set.x, dir, step_max, line_tol);
    if (gamma <= 0.0) return;
    for (std::size_t i = 0; i < n; ++i) set.alpha[set.active[i]] += gamma * rhs[i];
    if (blocking < n && gamma >= step_max) set.alpha[set.active[blocking]] = 0.0;

    double total = 0.0;
    for (std::size_t i : set.active) total += std::max(set.alpha[i], 0.0);
    for (std::size_t i : set.active) set.alpha[i] = std::max(set.alpha[i], 0.0) / total;
    set.rebuild();
  }
}

}  // namespace

ConcaveObjective entropy_objective() {
  ConcaveObjective obj;
  obj.value = [](std::span<const double> q) { return shannon_entropy(q); };
  obj.gradient = [](std::span<const double> q, std::span<double> g) {
    constexpr double kFloor = 1e-300;
    for (std::size_t i = 0; i < q.size(); ++i) {
      g[i] = -std::log2(std::max(q[i], kFloor)) - std::numbers::log2e;
    }
  };
  obj.hessian = [](std::span<const double> q, std::span<double> h) {
    constexpr double kFloor = 1e-300;
    const std::size_t k = q.size();
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) h[i * k + i] = -std::numbers::log2e / std::max(q[i], kFloor);
  };
  return obj;
}

FrankWolfeResult frank_wolfe_max(const std::vector<std::vector<double>>& vertices,
                                 const ConcaveObjective& objective,
                                 const FrankWolfeOptions& options) {
  if (vertices.empty()) throw Error(Errc::InvalidProblem, "Frank-Wolfe needs at least one vertex");
  const std::size_t dim = vertices.front().size();
  for (const auto& v : vertices) {
    if (v.size() != dim) throw Error(Errc::DimensionMismatch, "vertices differ in dimension");
  }
  const std::size_t count = vertices.size();

  std::size_t start = 0;
  double best = objective.value(vertices[0]);
  for (std::size_t i = 1; i < count; ++i) {
    const double v = objective.value(vertices[i]);
    if (v > best) {
      best = v;
      start = i;
    }
  }

  std::vector<double> alpha(count, 0.0);
  alpha[start] = 1.0;
  std::vector<std::size_t> active{start};
  std::vector<double> x = vertices[start];
  std::vector<double> grad(dim);
  std::vector<double> direction(dim);
  std::vector<double> scores(count);
  ActiveSet set{vertices, alpha, active, x};

  FrankWolfeResult result;
  for (int iter = 0;; ++iter) {
    objective.gradient(x, grad);
    for (std::size_t i = 0; i < count; ++i) scores[i] = dot(grad, vertices[i]);
    const double at_x = dot(grad, x);

    const auto fw = static_cast<std::size_t>(
        std::max_element(scores.begin(), scores.end()) - scores.begin());
    const double fw_gap = scores[fw] - at_x;
    if (fw_gap <= options.gap_tolerance) {
      result.gap = std::max(fw_gap, 0.0);
      result.iterations = iter;
      break;
    }
    if (iter >= options.max_iterations) {
      throw Error(Errc::ConvergenceFailure, "Frank-Wolfe gap " + std::to_string(fw_gap) +
                                                " after " + std::to_string(iter) + " iterations");
    }

    std::size_t away = active.front();
    for (std::size_t i : active) {
      if (scores[i] < scores[away]) away = i;
    }
    const double away_gap = at_x - scores[away];

    double gamma_max;
    bool away_step = away_gap > fw_gap && alpha[away] < 1.0;
    if (away_step) {
      for (std::size_t k = 0; k < dim; ++k) direction[k] = x[k] - vertices[away][k];
      gamma_max = alpha[away] / (1.0 - alpha[away]);
    } else {
      for (std::size_t k = 0; k < dim; ++k) direction[k] = vertices[fw][k] - x[k];
      gamma_max = 1.0;
    }
    const double gamma =
        exact_line_search(objective, x, direction, gamma_max, options.line_search_tolerance);

    if (away_step) {
      for (std::size_t i : active) alpha[i] *= 1.0 + gamma;
      alpha[away] -= gamma;
      if (gamma >= gamma_max) alpha[away] = 0.0;
    } else {
      for (std::size_t i : active) alpha[i] *= 1.0 - gamma;
      alpha[fw] += gamma;
      if (gamma >= 1.0) {
        std::fill(alpha.begin(), alpha.end(), 0.0);
        alpha[fw] = 1.0;
      }
    }

    set.rebuild();
    if (objective.hessian) newton_correct(set, objective, options.line_search_tolerance);
  }

  result.value = objective.value(x);
  if (result.value < best) {
    // rounding only; ascent steps never lose ground
    result.value = best;
    x = vertices[start];
    std::fill(alpha.begin(), alpha.end(), 0.0);
    alpha[start] = 1.0;
  }
  result.point = std::move(x);
  result.coefficients = std::move(alpha);
  return result;
}

}  // namespace ensuq
