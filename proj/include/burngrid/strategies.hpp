#pragma once

// Activator-sequence constructions and transformers, plus the serializable
// StrategySpec that names them.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "burngrid/engine.hpp"
#include "burngrid/geometry.hpp"
#include "burngrid/growth.hpp"
#include "burngrid/rational.hpp"

namespace burngrid {

/// Checkerboard of L1 balls over an integer w x l rectangle anchored at (0, 0):
/// centres (r*i, r*j) with i + j odd, i*r < w, j*r < l, row-major (j outer),
/// truncated to the budget. r = sqrt(w*l / (2*budget)).
class TilingIndex {
 public:
  /// Throws std::invalid_argument unless w, l, budget >= 1. With
  /// `truncate` false the whole lattice is kept even past the budget.
  TilingIndex(Count w, Count l, Count budget, bool truncate = true);

  Count w() const { return w_; }
  Count l() const { return l_; }
  Count budget() const { return budget_; }
  /// Exact r^2.
  Rational r_squared() const { return Rational(w_ * l_, 2 * budget_); }
  double r() const;
  /// Number of admissible i (resp. j) before budget truncation.
  Count columns() const { return columns_; }
  Count rows() const { return rows_; }
  /// Centres before truncation.
  Count total() const { return total_; }
  /// Centres after truncation.
  Count size() const { return size_; }
  bool truncated() const { return size_ < total_; }
  /// (i, j) of the k-th centre, 0 <= k < size().
  std::pair<Count, Count> index(Count k) const;
  /// (floor(r*i), floor(r*j)) of the k-th centre, computed exactly.
  LatticePoint floored(Count k) const;

 private:
  Count floor_scaled(Count i) const;
  Count w_;
  Count l_;
  Count budget_;
  Count columns_;
  Count rows_;
  Count total_;
  Count size_;
};

struct RealPoint {
  double x = 0.0;
  double y = 0.0;
};

struct TilingPlan {
  Count w = 0;
  Count l = 0;
  Count budget = 0;
  Rational r_squared;
  double r = 0.0;
  std::vector<std::pair<Count, Count>> indices;
  std::vector<RealPoint> centers;
  std::vector<LatticePoint> floored_centers;
  /// The budget cut the lattice short; coverage is then not guaranteed.
  bool truncated = false;
  /// Size of the whole lattice.
  Count lattice_size = 0;
};

TilingPlan rectangle_tiling(Count w, Count l, Count budget, bool truncate = true);

/// One epoch of the full-burn scheme: the whole of G_{start} is burned during
/// turns start+1 .. start+tau.
struct FullBurnEpoch {
  Turn start = 0;
  Coord radius = 0;
  /// Tile radius ceil(A^{1/3}) with A = (2*radius + 1)^2.
  Coord tile = 0;
  /// Largest checkerboard index; indices run over 0..last_index.
  Coord last_index = 0;
  Count centers = 0;
  Turn tau = 0;

  Turn end() const { return start + tau; }
  /// Lattice position of the m-th activation of the epoch.
  LatticePoint center(Count m) const;
};

FullBurnEpoch full_burn_epoch(const GrowthFunction& f, Turn start);

/// The four rectangles activated during phase i of the phase strategy.
struct PhaseRectangle {
  char name = 'U';
  LatticePoint origin;
  Count width = 0;
  Count height = 0;
};

struct PhaseLayout {
  Count index = 0;
  /// Turns first .. last.
  Turn first = 0;
  Turn last = 0;
  Count budget = 0;
  Coord w = 0;
  Coord l = 0;
  /// U, L, R, D in activation order.
  std::vector<PhaseRectangle> rectangles;
};

/// Turn t_i = i^4.
Turn phase_boundary(Count i);
PhaseLayout phase_layout(const Rational& c, Count i);

namespace spec {

struct ConstantOrigin {
  friend bool operator==(const ConstantOrigin&, const ConstantOrigin&) = default;
};

/// Explicit action list, then Pass forever.
struct Scripted {
  std::vector<std::optional<LatticePoint>> actions;
  friend bool operator==(const Scripted&, const Scripted&) = default;
};

/// Epochs are planned against `growth` when given, else against the run's f.
struct FullBurn {
  std::optional<std::string> growth;
  friend bool operator==(const FullBurn&, const FullBurn&) = default;
};

/// Burns a plan's floored centres shifted by `origin`, one per turn from t = 1.
struct RectangleTiling {
  Count w = 1;
  Count l = 1;
  Count budget = 1;
  LatticePoint origin;
  friend bool operator==(const RectangleTiling&, const RectangleTiling&) = default;
};

struct Phase {
  Rational c{1};
  friend bool operator==(const Phase&, const Phase&) = default;
};

struct Delay {
  Turn k = 0;
  friend bool operator==(const Delay&, const Delay&) = default;
};

struct Trim {
  Turn k = 0;
  friend bool operator==(const Trim&, const Trim&) = default;
};

/// Burn points move by offsets[t] (or default_offset) and are clamped to the box.
struct Perturb {
  Coord d = 0;
  std::map<Turn, LatticePoint> offsets;
  LatticePoint default_offset;
  friend bool operator==(const Perturb&, const Perturb&) = default;
};

/// Base designed for the grid `base_growth`, run unchanged on a dominating grid.
struct ReuseScaled {
  std::string base_growth;
  friend bool operator==(const ReuseScaled&, const ReuseScaled&) = default;
};

/// Same burn order, but each Burn waits until its point lies in the run's box.
struct WaitAdapt {
  friend bool operator==(const WaitAdapt&, const WaitAdapt&) = default;
};

using Transform = std::variant<Delay, Trim, Perturb, ReuseScaled, WaitAdapt>;

}  // namespace spec

struct StrategySpec;

namespace spec {
struct Transformed {
  std::shared_ptr<const StrategySpec> base;
  Transform transform;
  friend bool operator==(const Transformed& a, const Transformed& b);
};
}  // namespace spec

struct StrategySpec {
  std::variant<spec::ConstantOrigin, spec::Scripted, spec::FullBurn, spec::RectangleTiling, spec::Phase,
               spec::Transformed>
      kind;
  friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

StrategySpec constant_origin();
StrategySpec scripted(std::vector<std::optional<LatticePoint>> actions);
StrategySpec full_burn_strategy(std::optional<std::string> growth = std::nullopt);
StrategySpec rectangle_tiling_strategy(Count w, Count l, Count budget, LatticePoint origin = {});
StrategySpec phase_strategy(Rational c);
StrategySpec delay(StrategySpec base, Turn k);
StrategySpec trim(StrategySpec base, Turn k);
StrategySpec perturb(StrategySpec base, Coord d, std::map<Turn, LatticePoint> offsets, LatticePoint default_offset = {});
StrategySpec reuse_scaled(StrategySpec base, std::string base_growth);
StrategySpec wait_adapt(StrategySpec base);

/// Phase strategy built for ceil(c' n^{3/2}) with c' <= c chosen so that, run on
/// ceil(c n^{3/2}), the density approaches rho. Requires 0 < rho <= (1+sqrt(6)c)^-2.
StrategySpec phase_for_density(double rho, const Rational& c);

nlohmann::json strategy_to_json(const StrategySpec& s);
/// Throws std::invalid_argument naming the offending field.
StrategySpec strategy_from_json(const nlohmann::json& j);
/// Accepts inline JSON, a path to a JSON file, or a short name:
/// constant-origin | full-burn | phase | phase:<c>.
StrategySpec parse_strategy_arg(const std::string& text);

/// Builds the enumerator for a run on `run_growth` up to `horizon`. Throws
/// std::invalid_argument on precondition violations; soft problems (an empty
/// sequence, a trim that removes every Burn) go to `warnings`.
std::shared_ptr<const ActivatorSequence> compile(const StrategySpec& s, const GrowthFunction& run_growth,
                                                 Turn horizon, std::vector<std::string>* warnings = nullptr);

/// First Burn at or before the horizon.
std::optional<Turn> first_burn(const ActivatorSequence& seq, Turn horizon, Turn from = 1);

}  // namespace burngrid
