#pragma once

// Lattice geometry for the burning process: L1 balls ("diamonds"), centred
// square boxes, and exact or sampled cardinalities of their unions.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace burngrid {

/// Cardinalities reach (2*2e8+1)^2 ~ 1.6e17 at target scales.
using Count = std::int64_t;
using Coord = std::int64_t;

struct LatticePoint {
  Coord x = 0;
  Coord y = 0;

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

inline Coord l1_distance(LatticePoint a, LatticePoint b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

inline Coord linf_norm(LatticePoint p) {
  const Coord ax = p.x < 0 ? -p.x : p.x;
  const Coord ay = p.y < 0 ? -p.y : p.y;
  return ax > ay ? ax : ay;
}

/// All lattice points within L1 distance `radius` of `center`.
struct Diamond {
  LatticePoint center;
  Coord radius = 0;

  bool contains(LatticePoint p) const { return l1_distance(center, p) <= radius; }
  friend bool operator==(const Diamond&, const Diamond&) = default;
};

/// The square [-radius, radius]^2.
struct Box {
  Coord radius = 0;

  Count side() const { return 2 * radius + 1; }
  /// Throws std::overflow_error once side()^2 leaves the Count range
  /// (radius above about 1.5e9).
  Count cardinality() const;
  bool contains(LatticePoint p) const { return linf_norm(p) <= radius; }
  bool contains(const Diamond& d) const { return linf_norm(d.center) + d.radius <= radius; }
  LatticePoint clamp(LatticePoint p) const;
};

/// (r+1)^2 + r^2.
Count diamond_card(Coord radius);

/// |d ∩ b|, exact.
Count diamond_box_card(const Diamond& d, const Box& b);

struct ExactCount {};

struct SampledCount {
  std::int64_t rows = 0;
  std::uint64_t seed = 0;
};

using CountMode = std::variant<ExactCount, SampledCount>;

struct UnionCount {
  /// Exact cardinality, or the unbiased row-sampling estimate.
  double value = 0.0;
  /// Set only when the result is exact.
  std::optional<Count> exact;
  /// 95% normal-approximation half-width, in points; absent for exact results.
  std::optional<double> ci_halfwidth;
};

/// |(∪ ds) ∩ b|. Exact mode sweeps rows and merges per-row intervals, taking
/// the rotated-coordinate route instead when every diamond already lies in the
/// box. Sampled mode draws `rows` rows uniformly with replacement; asking for at
/// least as many rows as the box has enumerates every row and returns an exact
/// value with zero half-width. Throws std::invalid_argument on rows < 1.
UnionCount union_card(std::span<const Diamond> ds, const Box& b, const CountMode& mode);

/// Row sweep with interval merging, clipped to the box. Rows are partitioned
/// across `threads` workers (0 = default worker count); the sum is identical
/// for any worker count.
Count union_card_rows(std::span<const Diamond> ds, const Box& b, unsigned threads = 0);

/// Unclipped union cardinality via u = x + y, v = x - y: each diamond becomes
/// an axis-aligned square restricted to one parity class, and each class is a
/// union-of-rectangles area computed with a segment-tree sweep.
Count union_card_rotated(std::span<const Diamond> ds);

/// Drops exact duplicates of centre, keeping the largest radius per centre.
std::vector<Diamond> dedupe_centers(std::span<const Diamond> ds);

/// Worker count honoured by parallel sweeps: BURNGRID_THREADS if set and
/// positive, otherwise std::thread::hardware_concurrency().
unsigned default_worker_threads();

}  // namespace burngrid
