#include "ensuq/fractional.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ensuq/error.hpp"

namespace ensuq {

LinearProgram charnes_cooper(const FractionalProgram& fp) {
  const std::size_t m = fp.members();
  if (m == 0 || fp.denominator.size() != m) {
    throw Error(Errc::InvalidProblem, "numerator and denominator must share a nonzero length");
  }
  if (!(fp.delta >= 1.0) || !std::isfinite(fp.delta)) {
    throw Error(Errc::InvalidDelta, "delta must be finite and >= 1");
  }
  bool positive = false;
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(fp.numerator[i]) || !std::isfinite(fp.denominator[i])) {
      throw Error(Errc::InvalidProblem, "non-finite coefficient");
    }
    if (fp.denominator[i] < 0.0) {
      throw Error(Errc::DegenerateDenominator, "negative denominator coefficient");
    }
    positive = positive || fp.denominator[i] > 0.0;
  }
  if (!positive) throw Error(Errc::DegenerateDenominator, "denominator vanishes on the domain");

  const double md = static_cast<double>(m);
  const double lo = 1.0 / (fp.delta * md);
  const double hi = fp.delta / md;
  const double inf = std::numeric_limits<double>::infinity();

  const std::size_t t = m;
  const std::size_t n = 3 * m + 1;
  LinearProgram lp;
  lp.objective.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) lp.objective[i] = fp.numerator[i];
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, inf);
  lp.lower[t] = kMinScale;

  std::vector<double> row(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) row[i] = fp.denominator[i];
  lp.rows.push_back(row);
  lp.rhs.push_back(1.0);

  row.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) row[i] = 1.0;
  row[t] = -1.0;
  lp.rows.push_back(row);
  lp.rhs.push_back(0.0);

  for (std::size_t i = 0; i < m; ++i) {
    // w_i - lo t - u_i = 0
    row.assign(n, 0.0);
    row[i] = 1.0;
    row[t] = -lo;
    row[m + 1 + i] = -1.0;
    lp.rows.push_back(row);
    lp.rhs.push_back(0.0);
    // w_i - hi t + v_i = 0
    row.assign(n, 0.0);
    row[i] = 1.0;
    row[t] = -hi;
    row[2 * m + 1 + i] = 1.0;
    lp.rows.push_back(row);
    lp.rhs.push_back(0.0);
  }
  return lp;
}

FractionalSolution solve_fractional(const FractionalProgram& fp, const LpOptions& options) {
  const LinearProgram lp = charnes_cooper(fp);
  const LpSolution sol = solve_lp(lp, options);
  const std::size_t m = fp.members();
  FractionalSolution out;
  out.scale = sol.x[m];
  out.lp_objective = sol.objective;
  out.weights.resize(m);
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    out.weights[i] = std::max(0.0, sol.x[i]) / out.scale;
    sum += out.weights[i];
  }
  for (double& s : out.weights) s /= sum;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    num += fp.numerator[i] * out.weights[i];
    den += fp.denominator[i] * out.weights[i];
  }
  out.value = num / den;
  return out;
}

}  // namespace ensuq
