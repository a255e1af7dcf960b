#pragma once

#include <cstddef>
#include <vector>

#include "ensuq/lp.hpp"

namespace ensuq {

/// min (c's) / (d's) over the box-simplex
///   S_delta = { s : 1/(delta M) <= s_m <= delta/M, sum_m s_m = 1 }.
///
/// The denominator must be positive on the domain; with d >= 0 and some
/// d_m > 0 this holds because every s_m is strictly positive.
struct FractionalProgram {
  std::vector<double> numerator;
  std::vector<double> denominator;
  double delta = 1.0;

  std::size_t members() const noexcept { return numerator.size(); }
};

/// Floor on the Charnes-Cooper scale variable t.
inline constexpr double kMinScale = 1e-12;

/// Charnes-Cooper substitution t = 1 / (d's), w = t s. Variables are
/// (w_1..w_M, t, lower-slacks_1..M, upper-slacks_1..M); the objective
/// touches only w.
/// Throws Error{DegenerateDenominator | InvalidDelta | InvalidProblem}.
LinearProgram charnes_cooper(const FractionalProgram& fp);

struct FractionalSolution {
  double value = 0.0;
  std::vector<double> weights;  // optimal s, recovered as w / t
  double scale = 0.0;           // optimal t
  double lp_objective = 0.0;    // c'w at the LP optimum
};

FractionalSolution solve_fractional(const FractionalProgram& fp, const LpOptions& options = {});

}  // namespace ensuq
