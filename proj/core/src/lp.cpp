#include "ensuq/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ensuq/error.hpp"

namespace ensuq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// How an original variable is expressed through internal columns y >= 0.
enum class Mapping { Shifted, Mirrored, Split };

struct ColumnMap {
  Mapping kind;
  std::size_t column;  // first internal column
  double offset;       // lower bound (Shifted) or upper bound (Mirrored)
};

void validate(const LinearProgram& lp) {
  const std::size_t n = lp.variables();
  if (n == 0) throw Error(Errc::InvalidProblem, "no variables");
  if (lp.lower.size() != n || lp.upper.size() != n) {
    throw Error(Errc::InvalidProblem, "bound vectors must have one entry per variable");
  }
  if (lp.rhs.size() != lp.rows.size()) {
    throw Error(Errc::InvalidProblem, "rhs length differs from row count");
  }
  for (const auto& row : lp.rows) {
    if (row.size() != n) throw Error(Errc::InvalidProblem, "constraint row has wrong length");
    for (double a : row) {
      if (!std::isfinite(a)) throw Error(Errc::InvalidProblem, "non-finite constraint coefficient");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.objective[j])) throw Error(Errc::InvalidProblem, "non-finite cost");
    if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) || lp.lower[j] > lp.upper[j] ||
        lp.lower[j] == kInf || lp.upper[j] == -kInf) {
      throw Error(Errc::InvalidProblem, "bad bounds on variable " + std::to_string(j));
    }
  }
  for (double b : lp.rhs) {
    if (!std::isfinite(b)) throw Error(Errc::InvalidProblem, "non-finite rhs");
  }
}

// Dense tableau over internal columns: structural, then one artificial per row.
class BoundedSimplex {
 public:
  BoundedSimplex(std::vector<std::vector<double>> rows, std::vector<double> rhs,
                 std::vector<double> upper, const LpOptions& options)
      : m_(rows.size()), n_(upper.size()), opt_(options) {
    const std::size_t width = n_ + m_;
    tableau_.assign(m_, std::vector<double>(width, 0.0));
    ub_ = std::move(upper);
    ub_.resize(width, kInf);
    at_upper_.assign(width, false);
    basis_.resize(m_);
    beta_.resize(m_);
    rhs_ = std::move(rhs);
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = rhs_[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) tableau_[i][j] = sign * rows[i][j];
      rhs_[i] *= sign;
      tableau_[i][n_ + i] = 1.0;
      basis_[i] = n_ + i;
      beta_[i] = rhs_[i];
    }
    is_basic_.assign(width, false);
    for (std::size_t i = 0; i < m_; ++i) is_basic_[n_ + i] = true;
  }

  int phase_one() {
    std::vector<double> cost(n_ + m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) cost[n_ + i] = 1.0;
    const int iters = run(cost, n_ + m_);
    double infeasibility = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      scale = std::max(scale, std::abs(rhs_[i]));
      if (basis_[i] >= n_) infeasibility += std::max(0.0, beta_[i]);
    }
    if (infeasibility > opt_.feasibility_tolerance * scale) {
      throw Error(Errc::LpInfeasible,
                  "phase one ended with infeasibility " + std::to_string(infeasibility));
    }
    // Artificials are pinned to zero from here on; basic ones stay as
    // degenerate placeholders for redundant rows.
    for (std::size_t i = 0; i < m_; ++i) ub_[n_ + i] = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) beta_[i] = 0.0;
    }
    return iters;
  }

  int phase_two(const std::vector<double>& structural_cost) {
    std::vector<double> cost(n_ + m_, 0.0);
    std::copy(structural_cost.begin(), structural_cost.end(), cost.begin());
    return run(cost, n_);
  }

  double value(std::size_t j) const {
    if (is_basic_[j]) {
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] == j) return beta_[i];
      }
    }
    return at_upper_[j] ? ub_[j] : 0.0;
  }

  VarStatus status(std::size_t j) const {
    if (is_basic_[j]) return VarStatus::Basic;
    return at_upper_[j] ? VarStatus::AtUpper : VarStatus::AtLower;
  }

 private:
  // Minimizes cost over the current basis; columns >= enter_limit never enter.
  int run(const std::vector<double>& cost, std::size_t enter_limit) {
    int iterations = 0;
    std::vector<double> reduced(n_ + m_);
    while (true) {
      for (std::size_t j = 0; j < enter_limit; ++j) {
        if (is_basic_[j]) continue;
        double d = cost[j];
        for (std::size_t i = 0; i < m_; ++i) d -= cost[basis_[i]] * tableau_[i][j];
        reduced[j] = d;
      }
      // Bland: lowest-index improving column.
      std::size_t entering = enter_limit;
      for (std::size_t j = 0; j < enter_limit; ++j) {
        if (is_basic_[j] || ub_[j] <= 0.0) continue;
        const bool improves = at_upper_[j] ? reduced[j] > opt_.optimality_tolerance
                                           : reduced[j] < -opt_.optimality_tolerance;
        if (improves) {
          entering = j;
          break;
        }
      }
      if (entering == enter_limit) break;
      if (++iterations > opt_.max_iterations) {
        throw Error(Errc::CycleDetected, "simplex exceeded its pivot limit");
      }
      step(entering);
    }
    refresh_basic_values();
    return iterations;
  }

  void step(std::size_t j) {
    const double direction = at_upper_[j] ? -1.0 : 1.0;
    double theta = ub_[j];
    std::size_t leave_row = m_;
    bool leave_to_upper = false;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = direction * tableau_[i][j];
      double limit;
      bool to_upper;
      if (a > opt_.pivot_tolerance) {
        limit = beta_[i] / a;
        to_upper = false;
      } else if (a < -opt_.pivot_tolerance && std::isfinite(ub_[basis_[i]])) {
        limit = (ub_[basis_[i]] - beta_[i]) / -a;
        to_upper = true;
      } else {
        continue;
      }
      limit = std::max(limit, 0.0);
      const bool better = limit < theta;
      const bool tie_break = leave_row < m_ && limit == theta && basis_[i] < basis_[leave_row];
      if (better || tie_break) {
        theta = limit;
        leave_row = i;
        leave_to_upper = to_upper;
      }
    }
    if (!std::isfinite(theta)) throw Error(Errc::LpUnbounded, "objective is unbounded below");

    for (std::size_t i = 0; i < m_; ++i) beta_[i] -= theta * direction * tableau_[i][j];

    if (leave_row == m_) {
      at_upper_[j] = !at_upper_[j];
      return;
    }
    const double entering_value = at_upper_[j] ? ub_[j] - theta : theta;
    const std::size_t leaving = basis_[leave_row];
    at_upper_[leaving] = leave_to_upper;
    is_basic_[leaving] = false;
    pivot(leave_row, j);
    basis_[leave_row] = j;
    is_basic_[j] = true;
    at_upper_[j] = false;
    beta_[leave_row] = entering_value;
  }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = tableau_[r];
    const double inv = 1.0 / prow[c];
    for (double& x : prow) x *= inv;
    prow[c] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = tableau_[i][c];
      if (f == 0.0) continue;
      auto& row = tableau_[i];
      for (std::size_t k = 0; k < row.size(); ++k) row[k] -= f * prow[k];
      row[c] = 0.0;
    }
  }

  // beta = B^-1 (b - N x_N); B^-1 sits in the artificial block of the tableau.
  void refresh_basic_values() {
    for (std::size_t i = 0; i < m_; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < m_; ++k) v += tableau_[i][n_ + k] * rhs_[k];
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (!is_basic_[j] && at_upper_[j]) v -= tableau_[i][j] * ub_[j];
      }
      beta_[i] = v;
    }
  }

  std::size_t m_;
  std::size_t n_;
  LpOptions opt_;
  std::vector<std::vector<double>> tableau_;
  std::vector<double> rhs_;
  std::vector<double> ub_;
  std::vector<double> beta_;
  std::vector<std::size_t> basis_;
  std::vector<bool> at_upper_;
  std::vector<bool> is_basic_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  validate(lp);
  const std::size_t n = lp.variables();
  const std::size_t m = lp.constraints();

  std::vector<ColumnMap> maps;
  maps.reserve(n);
  std::size_t internal = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower[j])) {
      maps.push_back({Mapping::Shifted, internal++, lp.lower[j]});
    } else if (std::isfinite(lp.upper[j])) {
      maps.push_back({Mapping::Mirrored, internal++, lp.upper[j]});
    } else {
      maps.push_back({Mapping::Split, internal, 0.0});
      internal += 2;
    }
  }

  std::vector<std::vector<double>> rows(m, std::vector<double>(internal, 0.0));
  std::vector<double> rhs = lp.rhs;
  std::vector<double> cost(internal, 0.0);
  std::vector<double> upper(internal, kInf);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& map = maps[j];
    switch (map.kind) {
      case Mapping::Shifted:
        cost[map.column] = lp.objective[j];
        upper[map.column] = lp.upper[j] - lp.lower[j];
        for (std::size_t i = 0; i < m; ++i) {
          rows[i][map.column] = lp.rows[i][j];
          rhs[i] -= lp.rows[i][j] * map.offset;
        }
        break;
      case Mapping::Mirrored:
        cost[map.column] = -lp.objective[j];
        for (std::size_t i = 0; i < m; ++i) {
          rows[i][map.column] = -lp.rows[i][j];
          rhs[i] -= lp.rows[i][j] * map.offset;
        }
        break;
      case Mapping::Split:
        cost[map.column] = lp.objective[j];
        cost[map.column + 1] = -lp.objective[j];
        for (std::size_t i = 0; i < m; ++i) {
          rows[i][map.column] = lp.rows[i][j];
          rows[i][map.column + 1] = -lp.rows[i][j];
        }
        break;
    }
  }

  BoundedSimplex simplex(std::move(rows), std::move(rhs), std::move(upper), options);
  LpSolution out;
  out.iterations = simplex.phase_one();
  out.iterations += simplex.phase_two(cost);

  out.x.resize(n);
  out.status.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& map = maps[j];
    switch (map.kind) {
      case Mapping::Shifted: {
        out.status[j] = simplex.status(map.column);
        if (out.status[j] == VarStatus::AtLower) {
          out.x[j] = lp.lower[j];
        } else if (out.status[j] == VarStatus::AtUpper) {
          out.x[j] = lp.upper[j];
        } else {
          out.x[j] = map.offset + simplex.value(map.column);
        }
        break;
      }
      case Mapping::Mirrored: {
        const auto s = simplex.status(map.column);
        out.status[j] = s == VarStatus::AtLower ? VarStatus::AtUpper : s;
        out.x[j] = s == VarStatus::AtLower ? lp.upper[j] : map.offset - simplex.value(map.column);
        break;
      }
      case Mapping::Split: {
        out.x[j] = simplex.value(map.column) - simplex.value(map.column + 1);
        const bool basic = simplex.status(map.column) == VarStatus::Basic ||
                           simplex.status(map.column + 1) == VarStatus::Basic;
        out.status[j] = basic ? VarStatus::Basic : VarStatus::Free;
        break;
      }
    }
  }
  out.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.objective += lp.objective[j] * out.x[j];
  return out;
}

}  // namespace ensuq
