#pragma once

#include <cstdint>
#include <iterator>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace wearsim::testing {

inline std::uint64_t isqrt128(unsigned __int128 v) {
  std::uint64_t lo = 0, hi = std::uint64_t{1} << 63;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (static_cast<unsigned __int128>(mid) * mid <= v) lo = mid; else hi = mid - 1;
  }
  return lo;
}

/// Exact floor(n * (3 - sqrt(5)) / 2) in integer arithmetic. With
/// r = floor(sqrt(5 n^2)) and n*sqrt(5) irrational for n > 0, the floor is
/// (3n - r - 1) / 2 rounded down.
inline std::uint64_t exact_golden_floor(std::uint64_t n) {
  if (n == 0) return 0;
  const auto sq = static_cast<unsigned __int128>(n) * n * 5;
  const std::uint64_t r = isqrt128(sq);
  return (3 * n - r - 1) / 2;
}

/// Circular gaps between the sorted points of `points` on a ring of size n,
/// as a map gap -> multiplicity.
inline std::map<std::uint64_t, std::uint64_t> circular_gaps(
    const std::vector<std::uint64_t>& points, std::uint64_t n) {
  std::set<std::uint64_t> sorted(points.begin(), points.end());
  std::map<std::uint64_t, std::uint64_t> gaps;
  for (auto it = sorted.begin(); it != sorted.end(); ++it) {
    const auto next = std::next(it) == sorted.end() ? *sorted.begin() + n : *std::next(it);
    ++gaps[next - *it];
  }
  return gaps;
}

/// Inserts the points of `sequence` one at a time and reports the largest
/// number of distinct circular gap lengths seen after any prefix. Points
/// repeating an earlier one are reported through `repeated`.
inline std::size_t max_distinct_gaps_over_prefixes(const std::vector<std::uint64_t>& sequence,
                                                   std::uint64_t n, bool* repeated = nullptr) {
  std::set<std::uint64_t> points;
  std::map<std::uint64_t, std::uint64_t> gaps;
  auto add_gap = [&](std::uint64_t g) { ++gaps[g]; };
  auto drop_gap = [&](std::uint64_t g) {
    if (--gaps[g] == 0) gaps.erase(g);
  };
  std::size_t worst = 0;
  if (repeated) *repeated = false;
  for (const std::uint64_t p : sequence) {
    if (points.empty()) {
      points.insert(p);
      add_gap(n);
    } else {
      if (!points.insert(p).second) {
        if (repeated) *repeated = true;
        continue;
      }
      auto it = points.find(p);
      const std::uint64_t prev = it == points.begin() ? *points.rbegin() : *std::prev(it);
      const std::uint64_t next = std::next(it) == points.end() ? *points.begin() : *std::next(it);
      const std::uint64_t whole = (next + n - prev - 1) % n + 1;  // n when prev == next
      drop_gap(whole);
      add_gap((p + n - prev) % n);
      add_gap((next + n - p) % n);
    }
    worst = std::max(worst, gaps.size());
  }
  return worst;
}

}  // namespace wearsim::testing
