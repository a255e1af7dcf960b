#include "ensuq/box_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "ensuq/error.hpp"

namespace ensuq {

namespace {

constexpr double kVertexTolerance = 1e-12;

// Calls fn(mask) for every n-bit mask with exactly k bits set (Gosper's hack).
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  if (k == 0) {
    fn(std::uint64_t{0});
    return;
  }
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  while (mask < limit) {
    fn(mask);
    const std::uint64_t c = mask & (~mask + 1);
    const std::uint64_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
}

bool same_point(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > kVertexTolerance) return false;
  }
  return true;
}

}  // namespace

std::vector<std::vector<double>> box_simplex_vertices(std::size_t members, double lo, double hi) {
  if (members == 0) throw Error(Errc::InfeasibleBox, "need at least one member");
  if (members > kMaxEnumeratedMembers) {
    throw Error(Errc::TooManyMembers, "vertex enumeration is capped at " +
                                          std::to_string(kMaxEnumeratedMembers) + " members");
  }
  const double m = static_cast<double>(members);
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || lo > hi ||
      m * lo > 1.0 + kVertexTolerance || m * hi < 1.0 - kVertexTolerance) {
    throw Error(Errc::InfeasibleBox, "box [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                         "] does not meet the simplex");
  }
  if (members == 1 || hi - lo <= kVertexTolerance) {
    return {std::vector<double>(members, 1.0 / m)};
  }

  std::vector<std::vector<double>> out;
  // No free coordinate: every entry sits at a bound.
  for (std::size_t up = 0; up <= members; ++up) {
    const double total = static_cast<double>(up) * hi + static_cast<double>(members - up) * lo;
    if (std::abs(total - 1.0) > kVertexTolerance) continue;
    for_each_combination(members, up, [&](std::uint64_t mask) {
      std::vector<double> v(members);
      for (std::size_t i = 0; i < members; ++i) v[i] = (mask >> i) & 1 ? hi : lo;
      out.push_back(std::move(v));
    });
  }
  // Exactly one coordinate strictly inside its bounds.
  for (std::size_t free = 0; free < members; ++free) {
    for (std::size_t up = 0; up < members; ++up) {
      const double value = 1.0 - static_cast<double>(up) * hi -
                           static_cast<double>(members - 1 - up) * lo;
      if (value <= lo + kVertexTolerance || value >= hi - kVertexTolerance) continue;
      for_each_combination(members - 1, up, [&](std::uint64_t mask) {
        std::vector<double> v(members);
        std::size_t bit = 0;
        for (std::size_t i = 0; i < members; ++i) {
          if (i == free) {
            v[i] = value;
          } else {
            v[i] = (mask >> bit) & 1 ? hi : lo;
            ++bit;
          }
        }
        out.push_back(std::move(v));
      });
    }
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), same_point), out.end());
  return out;
}

}  // namespace ensuq
