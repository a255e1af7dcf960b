#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ensuq {

/// A concave function on R^K with its gradient and, optionally, its Hessian
/// (row-major K x K). Without a Hessian only first-order steps are taken.
struct ConcaveObjective {
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double> point, std::span<double> grad)> gradient;
  std::function<void(std::span<const double> point, std::span<double> hess)> hessian;
};

/// Shannon entropy (bits). Gradient and Hessian floor coordinates at 1e-300
/// so that boundary points score finitely in the linear oracle.
ConcaveObjective entropy_objective();

struct FrankWolfeOptions {
  double gap_tolerance = 1e-8;
  int max_iterations = 5000;
  /// Width at which the exact line search stops bisecting.
  double line_search_tolerance = 1e-12;
};

struct FrankWolfeResult {
  double value = 0.0;
  std::vector<double> point;
  /// Convex-combination coefficients over the input vertices.
  std::vector<double> coefficients;
  double gap = 0.0;
  int iterations = 0;
};

/// Maximizes a concave objective over conv(vertices) with away-step
/// Frank-Wolfe. When the objective has a Hessian, every step is followed by
/// Newton corrections of the weights on the active vertices, which removes
/// the zig-zagging of plain Frank-Wolfe near faces. Starts at the best vertex, so the result is never below the
/// best vertex value. Stops once the Frank-Wolfe duality gap is below
/// gap_tolerance; throws Error{ConvergenceFailure} at the iteration cap.
FrankWolfeResult frank_wolfe_max(const std::vector<std::vector<double>>& vertices,
                                 const ConcaveObjective& objective,
                                 const FrankWolfeOptions& options = {});

}  // namespace ensuq
