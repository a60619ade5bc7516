#pragma once

// Brute-force reference implementations. Deliberately naive: cell-by-cell
// enumeration and std::set bookkeeping, sharing no code with the library.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Point = std::pair<long long, long long>;
using BigInt = boost::multiprecision::cpp_int;

inline long long l1(Point a, Point b) { return std::llabs(a.first - b.first) + std::llabs(a.second - b.second); }

inline bool in_box(Point p, long long radius) {
  return std::llabs(p.first) <= radius && std::llabs(p.second) <= radius;
}

// Smallest m with m >= c * n^(p/q), c = cn/cd; linear search from a safe start.
inline long long ceil_power(long long cn, long long cd, long long p, long long q, long long n) {
  // m >= cn/cd * n^(p/q)  <=>  (m*cd)^q >= cn^q * n^p
  const BigInt rhs = boost::multiprecision::pow(BigInt(cn), static_cast<unsigned>(q)) *
                     boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(p));
  long long m = static_cast<long long>(std::floor(static_cast<double>(cn) / static_cast<double>(cd) *
                                                  std::pow(static_cast<double>(n), static_cast<double>(p) / q))) -
                3;
  if (m < 0) m = 0;
  while (boost::multiprecision::pow(BigInt(m) * cd, static_cast<unsigned>(q)) < rhs) ++m;
  return m;
}

// Count of lattice points of [-radius, radius]^2 within L1 distance of some diamond.
inline long long union_count(const std::vector<std::pair<Point, long long>>& diamonds, long long radius) {
  long long count = 0;
  for (long long y = -radius; y <= radius; ++y) {
    for (long long x = -radius; x <= radius; ++x) {
      for (const auto& [c, r] : diamonds) {
        if (l1({x, y}, c) <= r) {
          ++count;
          break;
        }
      }
    }
  }
  return count;
}

// Unclipped union count over a bounding window.
inline long long union_count_unclipped(const std::vector<std::pair<Point, long long>>& diamonds) {
  long long reach = 0;
  for (const auto& [c, r] : diamonds) {
    reach = std::max({reach, std::llabs(c.first) + r, std::llabs(c.second) + r});
  }
  return union_count(diamonds, reach);
}

// The burning process cell by cell on centred boxes. actions[t-1] is the
// turn-t activation (nullopt = Pass); out-of-box activations are ignored by
// callers that pass only admissible ones.
struct Process {
  std::function<long long(long long)> f;
  std::set<Point> burned;
  long long turn = 0;

  void spread() {
    const long long radius = f(turn);
    std::set<Point> next = burned;
    for (const Point& p : burned) {
      for (const Point d : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}}) {
        const Point q{p.first + d.first, p.second + d.second};
        if (in_box(q, radius)) next.insert(q);
      }
    }
    burned = std::move(next);
  }

  void step(std::optional<Point> a) {
    ++turn;
    spread();
    if (a) burned.insert(*a);
  }
};

inline std::vector<long long> process_counts(const std::function<long long(long long)>& f,
                                             const std::vector<std::optional<Point>>& actions) {
  Process proc{f, {}, 0};
  std::vector<long long> counts;
  for (const auto& a : actions) {
    proc.step(a);
    counts.push_back(static_cast<long long>(proc.burned.size()));
  }
  return counts;
}

// The process restricted to one activation, on a fixed rectangle
// [0, w] x [0, l]: the set a single fire occupies after `steps` turns of spread.
inline std::set<Point> rectangle_ball(Point center, long long steps, long long w, long long l) {
  std::set<Point> cells{center};
  for (long long s = 0; s < steps; ++s) {
    std::set<Point> next = cells;
    for (const Point& p : cells) {
      for (const Point d : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}}) {
        const Point q{p.first + d.first, p.second + d.second};
        if (q.first >= 0 && q.first <= w && q.second >= 0 && q.second <= l) next.insert(q);
      }
    }
    cells = std::move(next);
  }
  return cells;
}

// Union burned set on the fixed rectangle with activations at turns 1..n.
inline std::set<Point> rectangle_union(const std::vector<Point>& centers, long long turns, long long w, long long l) {
  std::set<Point> burned;
  for (long long t = 1; t <= turns; ++t) {
    std::set<Point> next = burned;
    for (const Point& p : burned) {
      for (const Point d : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}}) {
        const Point q{p.first + d.first, p.second + d.second};
        if (q.first >= 0 && q.first <= w && q.second >= 0 && q.second <= l) next.insert(q);
      }
    }
    burned = std::move(next);
    if (t <= static_cast<long long>(centers.size())) burned.insert(centers[static_cast<std::size_t>(t - 1)]);
  }
  return burned;
}

// floor(sqrt(num / den)) by increment.
inline long long floor_sqrt_ratio(long long num, long long den) {
  long long m = 0;
  while ((m + 1) * (m + 1) * den <= num) ++m;
  return m;
}

}  // namespace oracle
