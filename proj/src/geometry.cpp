#include "burngrid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

namespace burngrid {

namespace {

Coord floor_div(Coord a, Coord b) {
  Coord q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Coord ceil_div(Coord a, Coord b) { return -floor_div(-a, b); }

struct Interval {
  Coord lo;
  Coord hi;  // inclusive
};

// Ascending-row sweep over diamonds sorted by their bottom row. Keeps the set
// of diamonds that intersect the current row and merges their clipped
// intervals.
class RowSweeper {
 public:
  RowSweeper(std::span<const Diamond> sorted_by_bottom, Coord box_radius)
      : ds_(sorted_by_bottom), box_radius_(box_radius) {}

  // Rows must be visited in non-decreasing order.
  Count row_length(Coord y) {
    while (next_ < ds_.size() && ds_[next_].center.y - ds_[next_].radius <= y) {
      if (ds_[next_].center.y + ds_[next_].radius >= y) active_.push_back(ds_[next_]);
      ++next_;
    }
    intervals_.clear();
    for (std::size_t i = 0; i < active_.size();) {
      const Diamond& d = active_[i];
      const Coord dy = d.center.y > y ? d.center.y - y : y - d.center.y;
      if (dy > d.radius) {
        active_[i] = active_.back();
        active_.pop_back();
        continue;
      }
      const Coord half = d.radius - dy;
      const Coord lo = std::max(d.center.x - half, -box_radius_);
      const Coord hi = std::min(d.center.x + half, box_radius_);
      if (lo <= hi) intervals_.push_back({lo, hi});
      ++i;
    }
    if (intervals_.empty()) return 0;
    std::sort(intervals_.begin(), intervals_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    Count total = 0;
    Coord cur_lo = intervals_.front().lo;
    Coord cur_hi = intervals_.front().hi;
    for (std::size_t i = 1; i < intervals_.size(); ++i) {
      if (intervals_[i].lo > cur_hi + 1) {
        total += cur_hi - cur_lo + 1;
        cur_lo = intervals_[i].lo;
        cur_hi = intervals_[i].hi;
      } else if (intervals_[i].hi > cur_hi) {
        cur_hi = intervals_[i].hi;
      }
    }
    return total + (cur_hi - cur_lo + 1);
  }

 private:
  std::span<const Diamond> ds_;
  Coord box_radius_;
  std::size_t next_ = 0;
  std::vector<Diamond> active_;
  std::vector<Interval> intervals_;
};

std::vector<Diamond> sorted_by_bottom(std::span<const Diamond> ds) {
  std::vector<Diamond> out = dedupe_centers(ds);
  std::sort(out.begin(), out.end(), [](const Diamond& a, const Diamond& b) {
    return a.center.y - a.radius < b.center.y - b.radius;
  });
  return out;
}

// Union of half-open integer rectangles [a0, a1) x [b0, b1), counted in cells.
class RectangleUnion {
 public:
  void add(Coord a0, Coord a1, Coord b0, Coord b1) {
    if (a0 >= a1 || b0 >= b1) return;
    events_.push_back({a0, b0, b1, +1});
    events_.push_back({a1, b0, b1, -1});
    ys_.push_back(b0);
    ys_.push_back(b1);
  }

  Count area() {
    if (events_.empty()) return 0;
    std::sort(ys_.begin(), ys_.end());
    ys_.erase(std::unique(ys_.begin(), ys_.end()), ys_.end());
    std::sort(events_.begin(), events_.end(), [](const Event& a, const Event& b) { return a.a < b.a; });
    const std::size_t segments = ys_.size() - 1;
    cover_.assign(4 * segments + 4, 0);
    length_.assign(4 * segments + 4, 0);
    Count total = 0;
    Coord prev_a = events_.front().a;
    for (const Event& e : events_) {
      total += length_[1] * (e.a - prev_a);
      prev_a = e.a;
      const auto lo = static_cast<std::size_t>(std::lower_bound(ys_.begin(), ys_.end(), e.b0) - ys_.begin());
      const auto hi = static_cast<std::size_t>(std::lower_bound(ys_.begin(), ys_.end(), e.b1) - ys_.begin());
      update(1, 0, segments, lo, hi, e.delta);
    }
    return total;
  }

 private:
  struct Event {
    Coord a;
    Coord b0;
    Coord b1;
    int delta;
  };

  // Node covers elementary segments [l, r).
  void update(std::size_t node, std::size_t l, std::size_t r, std::size_t ql, std::size_t qr, int delta) {
    if (qr <= l || r <= ql) return;
    if (ql <= l && r <= qr) {
      cover_[node] += delta;
    } else {
      const std::size_t mid = (l + r) / 2;
      update(2 * node, l, mid, ql, qr, delta);
      update(2 * node + 1, mid, r, ql, qr, delta);
    }
    if (cover_[node] > 0) {
      length_[node] = ys_[r] - ys_[l];
    } else if (r - l == 1) {
      length_[node] = 0;
    } else {
      length_[node] = length_[2 * node] + length_[2 * node + 1];
    }
  }

  std::vector<Event> events_;
  std::vector<Coord> ys_;
  std::vector<int> cover_;
  std::vector<Count> length_;
};

}  // namespace

LatticePoint Box::clamp(LatticePoint p) const {
  return {std::clamp(p.x, -radius, radius), std::clamp(p.y, -radius, radius)};
}

Count Box::cardinality() const {
  Count out = 0;
  if (__builtin_mul_overflow(side(), side(), &out)) {
    throw std::overflow_error("box of radius " + std::to_string(radius) + " has more cells than a 64-bit count holds");
  }
  return out;
}

Count diamond_card(Coord radius) { return (radius + 1) * (radius + 1) + radius * radius; }

Count diamond_box_card(const Diamond& d, const Box& b) {
  const Coord y_lo = std::max(d.center.y - d.radius, -b.radius);
  const Coord y_hi = std::min(d.center.y + d.radius, b.radius);
  Count total = 0;
  for (Coord y = y_lo; y <= y_hi; ++y) {
    const Coord dy = d.center.y > y ? d.center.y - y : y - d.center.y;
    const Coord half = d.radius - dy;
    const Coord lo = std::max(d.center.x - half, -b.radius);
    const Coord hi = std::min(d.center.x + half, b.radius);
    if (lo <= hi) total += hi - lo + 1;
  }
  return total;
}

std::vector<Diamond> dedupe_centers(std::span<const Diamond> ds) {
  std::vector<Diamond> out(ds.begin(), ds.end());
  std::sort(out.begin(), out.end(), [](const Diamond& a, const Diamond& b) {
    if (a.center != b.center) return a.center < b.center;
    return a.radius > b.radius;
  });
  out.erase(std::unique(out.begin(), out.end(), [](const Diamond& a, const Diamond& b) { return a.center == b.center; }),
            out.end());
  return out;
}

unsigned default_worker_threads() {
  if (const char* env = std::getenv("BURNGRID_THREADS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Count union_card_rows(std::span<const Diamond> ds, const Box& b, unsigned threads) {
  const std::vector<Diamond> sorted = sorted_by_bottom(ds);
  if (sorted.empty()) return 0;
  Coord y_lo = b.radius;
  Coord y_hi = -b.radius;
  for (const Diamond& d : sorted) {
    y_lo = std::min(y_lo, d.center.y - d.radius);
    y_hi = std::max(y_hi, d.center.y + d.radius);
  }
  y_lo = std::max(y_lo, -b.radius);
  y_hi = std::min(y_hi, b.radius);
  if (y_lo > y_hi) return 0;

  const Count rows = y_hi - y_lo + 1;
  unsigned workers = threads == 0 ? default_worker_threads() : threads;
  workers = static_cast<unsigned>(std::min<Count>(workers, std::max<Count>(1, rows / 4096)));

  std::vector<Count> partial(workers, 0);
  const auto sweep_range = [&](unsigned w) {
    const Coord first = y_lo + rows * w / workers;
    const Coord last = y_lo + rows * (w + 1) / workers;  // exclusive
    RowSweeper sweeper(sorted, b.radius);
    Count sum = 0;
    for (Coord y = first; y < last; ++y) sum += sweeper.row_length(y);
    partial[w] = sum;
  };
  if (workers == 1) {
    sweep_range(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(sweep_range, w);
    for (auto& t : pool) t.join();
  }
  Count total = 0;
  for (Count p : partial) total += p;
  return total;
}

Count union_card_rotated(std::span<const Diamond> ds) {
  Count total = 0;
  for (Coord parity = 0; parity < 2; ++parity) {
    RectangleUnion rects;
    for (const Diamond& d : ds) {
      const Coord cu = d.center.x + d.center.y;
      const Coord cv = d.center.x - d.center.y;
      // u = 2a + parity with |u - cu| <= r
      const Coord a0 = ceil_div(cu - d.radius - parity, 2);
      const Coord a1 = floor_div(cu + d.radius - parity, 2);
      const Coord b0 = ceil_div(cv - d.radius - parity, 2);
      const Coord b1 = floor_div(cv + d.radius - parity, 2);
      rects.add(a0, a1 + 1, b0, b1 + 1);
    }
    total += rects.area();
  }
  return total;
}

UnionCount union_card(std::span<const Diamond> ds, const Box& b, const CountMode& mode) {
  if (const auto* sampled = std::get_if<SampledCount>(&mode)) {
    if (sampled->rows < 1) throw std::invalid_argument("sampled counting needs rows >= 1");
    if (sampled->rows >= b.side()) {
      const Count exact = union_card_rows(ds, b);
      return {static_cast<double>(exact), exact, 0.0};
    }
    std::mt19937_64 rng(sampled->seed);
    std::uniform_int_distribution<Coord> pick(-b.radius, b.radius);
    std::vector<Coord> rows(static_cast<std::size_t>(sampled->rows));
    for (Coord& y : rows) y = pick(rng);
    std::sort(rows.begin(), rows.end());

    const std::vector<Diamond> sorted = sorted_by_bottom(ds);
    RowSweeper sweeper(sorted, b.radius);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (Coord y : rows) {
      const auto len = static_cast<double>(sweeper.row_length(y));
      sum += len;
      sum_sq += len * len;
    }
    const auto k = static_cast<double>(rows.size());
    const double mean = sum / k;
    const double var = k > 1 ? std::max(0.0, (sum_sq - k * mean * mean) / (k - 1)) : 0.0;
    const auto side = static_cast<double>(b.side());
    return {side * mean, std::nullopt, 1.96 * side * std::sqrt(var / k)};
  }

  bool inside = true;
  for (const Diamond& d : ds) {
    if (!b.contains(d)) {
      inside = false;
      break;
    }
  }
  const Count exact = inside ? union_card_rotated(dedupe_centers(ds)) : union_card_rows(ds, b);
  return {static_cast<double>(exact), exact, std::nullopt};
}

}  // namespace burngrid
