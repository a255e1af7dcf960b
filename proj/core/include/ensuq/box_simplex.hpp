#pragma once

#include <cstddef>
#include <vector>

namespace ensuq {

/// Largest member count the vertex enumerator accepts.
inline constexpr std::size_t kMaxEnumeratedMembers = 20;

/// All vertices of { s in R^M : lo <= s_m <= hi, sum_m s_m = 1 }.
///
/// A point is a vertex iff at most one coordinate lies strictly between the
/// bounds, so the enumeration runs over (free index or none) x (set of
/// coordinates at the upper bound) and keeps the feasible assignments.
/// Output is sorted lexicographically and deduplicated within 1e-12.
/// Throws Error{InfeasibleBox | TooManyMembers}.
std::vector<std::vector<double>> box_simplex_vertices(std::size_t members, double lo, double hi);

}  // namespace ensuq
