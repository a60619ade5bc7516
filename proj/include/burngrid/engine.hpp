#pragma once

// The burning process on G(f): each turn the grid grows to [-f(t), f(t)]^2,
// fire spreads to every in-box neighbour of the burned set, then the turn's
// activator (if any) is burned.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "burngrid/geometry.hpp"
#include "burngrid/growth.hpp"

namespace burngrid {

/// One turn's choice: burn a point, or pass.
struct Action {
  std::optional<LatticePoint> burn;

  static Action pass() { return {}; }
  static Action at(LatticePoint p) { return {p}; }
  bool is_pass() const { return !burn.has_value(); }
  friend bool operator==(const Action&, const Action&) = default;
};

struct ActivationRecord {
  Turn turn = 0;
  LatticePoint point;
};

/// Anything that yields action(t) for t >= 1. Implementations must be
/// deterministic and safe to query concurrently.
class ActivatorSequence {
 public:
  virtual ~ActivatorSequence() = default;
  virtual Action action(Turn t) const = 0;
  virtual std::string describe() const = 0;
  /// Turns at which a natural unit of the strategy (phase, epoch) ends.
  virtual std::vector<Turn> phase_ends(Turn horizon) const {
    (void)horizon;
    return {};
  }
};

enum class BoxPolicy {
  /// Reject activations outside [-f(t), f(t)]^2.
  Strict,
  /// Clamp them to the nearest box point and record the clamp.
  Lenient,
};

class OutOfBoxActivation : public std::runtime_error {
 public:
  OutOfBoxActivation(Turn turn, LatticePoint point, Box box);
  Turn turn;
  LatticePoint point;
  Box box;
};

struct ClampEvent {
  Turn turn = 0;
  LatticePoint requested;
  LatticePoint applied;
  Coord linf_distance = 0;
};

/// Applies the box policy to a Burn at turn t; Pass is returned unchanged.
Action admit_action(const Action& action, Turn t, const Box& box, BoxPolicy policy,
                    std::vector<ClampEvent>* clamps = nullptr);

/// Bit-packed square window [-radius, radius]^2.
class BitGrid {
 public:
  explicit BitGrid(Coord radius = 0);
  Coord radius() const { return radius_; }
  bool in_window(LatticePoint p) const { return linf_norm(p) <= radius_; }
  bool test(LatticePoint p) const;
  /// Returns true when the bit was newly set.
  bool set(LatticePoint p);

 private:
  std::size_t index(LatticePoint p) const;
  Coord radius_;
  Count side_;
  std::vector<std::uint64_t> words_;
};

/// A burned set that spreads by one L1 step per turn inside a box.
class CellSet {
 public:
  explicit CellSet(Coord window_radius);

  /// Burns every unburned point of `box` adjacent to the current set.
  void spread(const Box& box);
  void add(LatticePoint p);

  bool contains(LatticePoint p) const { return bits_.in_window(p) && bits_.test(p); }
  Count size() const { return count_; }
  Coord window_radius() const { return bits_.radius(); }
  /// Every burned point, sorted. Intended for small test grids.
  std::vector<LatticePoint> points() const;

 private:
  BitGrid bits_;
  std::vector<LatticePoint> frontier_;
  Count count_ = 0;
};

struct OracleOptions {
  BoxPolicy policy = BoxPolicy::Strict;
  /// Track B_t[i] for each activation i separately.
  bool provenance = false;
  /// Largest window (in cells) the oracle will allocate.
  Count cell_budget = 400'000'000;
};

/// Cellwise reference implementation, valid for any growth function.
class OracleProcess {
 public:
  /// `window_radius` bounds where fire can ever reach; cells outside it are
  /// never allocated. Throws std::invalid_argument when the window exceeds the
  /// cell budget.
  OracleProcess(GrowthFunction f, Coord window_radius, OracleOptions options = {});

  /// One full turn: begin_turn, spread, activate.
  void step(const Action& action);

  /// Phase (1): turn += 1, box radius becomes f(turn).
  void begin_turn();
  /// Phase (2).
  void spread();
  /// Phase (3). Returns the action actually applied after the box policy.
  Action activate(const Action& action);

  Turn turn() const { return turn_; }
  Box box() const { return box_; }
  Count burned_count() const { return burned_.size(); }
  const CellSet& burned() const { return burned_; }
  const std::vector<ClampEvent>& clamps() const { return clamps_; }

  /// B_turn[i] for the Burn made at activation turn i; requires provenance.
  /// Returns nullptr when turn i was a Pass.
  const CellSet* provenance(Turn activation_turn) const;

 private:
  GrowthFunction f_;
  OracleOptions options_;
  Turn turn_ = 0;
  Box box_{0};
  CellSet burned_;
  std::vector<ClampEvent> clamps_;
  std::vector<std::pair<Turn, std::unique_ptr<CellSet>>> per_activation_;
};

/// Stores Burn records only and evaluates |B_t| as a union of diamonds.
/// Requires a strictly increasing growth function.
class GeometricProcess {
 public:
  explicit GeometricProcess(GrowthFunction f, BoxPolicy policy = BoxPolicy::Strict);

  void step(const Action& action);

  Turn turn() const { return turn_; }
  Box box() const { return box_; }
  const std::vector<ActivationRecord>& records() const { return records_; }
  const std::vector<ClampEvent>& clamps() const { return clamps_; }
  UnionCount burned_count(const CountMode& mode = ExactCount{}) const;

 private:
  GrowthFunction f_;
  BoxPolicy policy_;
  Turn turn_ = 0;
  Box box_{0};
  std::vector<ActivationRecord> records_;
  std::vector<ClampEvent> clamps_;
};

/// |∪ {v_i, t - i}| clipped to Box{f(t)}. Throws std::invalid_argument when f
/// is not strictly increasing or a record is later than t.
UnionCount burned_count_geometric(std::span<const ActivationRecord> records, Turn t, const GrowthFunction& f,
                                  const CountMode& mode = ExactCount{});

enum class Backend { Oracle, Geometric };

struct TraceEntry {
  Turn t = 0;
  /// Exact count, or the rounded estimate in sampled mode.
  Count burned = 0;
  Count total = 0;
  double density = 0.0;
  bool sampled = false;
  /// Half-width of the 95% interval on the density, sampled mode only.
  std::optional<double> ci_halfwidth;
};

struct TraceMetadata {
  std::string growth;
  std::string strategy;
  std::string backend;
  std::optional<std::uint64_t> seed;
};

struct DensityTrace {
  std::vector<TraceEntry> entries;
  TraceMetadata meta;
  std::vector<ClampEvent> clamps;
};

struct RunOptions {
  BoxPolicy policy = BoxPolicy::Strict;
  Count cell_budget = 400'000'000;
};

/// Advances the process to `horizon`, recording |B_t| at each checkpoint.
/// Checkpoints must be strictly increasing and lie in [1, horizon].
DensityTrace run(const GrowthFunction& f, const ActivatorSequence& strategy, Turn horizon,
                 std::span<const Turn> checkpoints, Backend backend, const CountMode& count_mode = ExactCount{},
                 const RunOptions& options = {});

/// Radius of the smallest centred square holding every cell the process can
/// burn by `horizon`, capped at f(horizon).
Coord oracle_window_radius(const GrowthFunction& f, const ActivatorSequence& strategy, Turn horizon, BoxPolicy policy);

struct BackendComparison {
  bool agree = true;
  Turn turns_checked = 0;
  /// First turn where the counts differ.
  std::optional<Turn> first_mismatch;
  Count oracle_count = 0;
  Count geometric_count = 0;
};

/// Steps both backends together and compares exact counts after every turn.
BackendComparison compare_backends(const GrowthFunction& f, const ActivatorSequence& strategy, Turn horizon,
                                   const RunOptions& options = {});

/// CSV with header `t,burned,total,density,mode,ci_halfwidth`, preceded by
/// `# key=value` metadata lines.
void write_trace_csv(const DensityTrace& trace, std::ostream& out);
/// Throws std::invalid_argument naming the offending line.
DensityTrace read_trace_csv(std::istream& in);

inline constexpr std::string_view kTraceHeader = "t,burned,total,density,mode,ci_halfwidth";

}  // namespace burngrid
