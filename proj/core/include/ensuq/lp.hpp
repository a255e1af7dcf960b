#pragma once

#include <cstddef>
#include <vector>

namespace ensuq {

/// min c'x  s.t.  A x = b,  lower <= x <= upper.
///
/// Bounds may be +-infinity. Constraint rows are dense; the solver targets
/// the small programs produced by the credal machinery (tens of columns).
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t variables() const noexcept { return objective.size(); }
  std::size_t constraints() const noexcept { return rows.size(); }
};

enum class VarStatus { Basic, AtLower, AtUpper, Free };

struct LpSolution {
  double objective = 0.0;
  std::vector<double> x;
  /// Final basis status of each original variable. Split free variables
  /// report Free unless one of their halves is basic.
  std::vector<VarStatus> status;
  int iterations = 0;
};

struct LpOptions {
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-11;
  double pivot_tolerance = 1e-11;
  /// Per-phase pivot cap; Bland's rule cannot cycle, so reaching it means
  /// numerical trouble and raises CycleDetected.
  int max_iterations = 100000;
};

/// Two-phase bounded-variable primal simplex with Bland's rule.
/// Throws Error{InvalidProblem | LpInfeasible | LpUnbounded | CycleDetected}.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace ensuq
