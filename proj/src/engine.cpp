#include "burngrid/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace burngrid {

namespace {

constexpr std::array<LatticePoint, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

std::string point_str(LatticePoint p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_non_decreasing(const GrowthFunction& f, Turn t, Coord previous, Coord current) {
  if (current < previous) {
    throw std::invalid_argument("growth function " + f.describe() + " decreases at n = " + std::to_string(t) +
                                " (" + std::to_string(previous) + " -> " + std::to_string(current) +
                                "); grids must be nested");
  }
}

}  // namespace

OutOfBoxActivation::OutOfBoxActivation(Turn t, LatticePoint p, Box b)
    : std::runtime_error("activation " + point_str(p) + " at turn " + std::to_string(t) + " lies outside the box [-" +
                         std::to_string(b.radius) + ", " + std::to_string(b.radius) + "]^2"),
      turn(t),
      point(p),
      box(b) {}

Action admit_action(const Action& action, Turn t, const Box& box, BoxPolicy policy, std::vector<ClampEvent>* clamps) {
  if (action.is_pass() || box.contains(*action.burn)) return action;
  if (policy == BoxPolicy::Strict) throw OutOfBoxActivation(t, *action.burn, box);
  const LatticePoint applied = box.clamp(*action.burn);
  if (clamps != nullptr) {
    const LatticePoint requested = *action.burn;
    clamps->push_back({t, requested, applied,
                       std::max(std::abs(requested.x - applied.x), std::abs(requested.y - applied.y))});
  }
  return Action::at(applied);
}

BitGrid::BitGrid(Coord radius) : radius_(radius), side_(2 * radius + 1) {
  const auto cells = static_cast<std::size_t>(side_) * static_cast<std::size_t>(side_);
  words_.assign((cells + 63) / 64, 0);
}

std::size_t BitGrid::index(LatticePoint p) const {
  return static_cast<std::size_t>(p.y + radius_) * static_cast<std::size_t>(side_) +
         static_cast<std::size_t>(p.x + radius_);
}

bool BitGrid::test(LatticePoint p) const {
  const std::size_t i = index(p);
  return (words_[i / 64] >> (i % 64)) & 1u;
}

bool BitGrid::set(LatticePoint p) {
  const std::size_t i = index(p);
  const std::uint64_t mask = std::uint64_t{1} << (i % 64);
  if (words_[i / 64] & mask) return false;
  words_[i / 64] |= mask;
  return true;
}

CellSet::CellSet(Coord window_radius) : bits_(window_radius) {}

void CellSet::spread(const Box& box) {
  std::vector<LatticePoint> next;
  next.reserve(frontier_.size() + 8);
  for (const LatticePoint p : frontier_) {
    bool waiting = false;
    for (const LatticePoint step : kSteps) {
      const LatticePoint q{p.x + step.x, p.y + step.y};
      if (!bits_.in_window(q)) {
        if (box.contains(q)) throw std::logic_error("fire reached " + point_str(q) + " outside the oracle window");
        continue;
      }
      if (bits_.test(q)) continue;
      if (box.contains(q)) {
        bits_.set(q);
        ++count_;
        next.push_back(q);
      } else {
        waiting = true;
      }
    }
    if (waiting) next.push_back(p);
  }
  frontier_ = std::move(next);
}

void CellSet::add(LatticePoint p) {
  if (!bits_.in_window(p)) throw std::logic_error("activation " + point_str(p) + " outside the oracle window");
  if (bits_.set(p)) {
    ++count_;
    frontier_.push_back(p);
  }
}

std::vector<LatticePoint> CellSet::points() const {
  std::vector<LatticePoint> out;
  const Coord r = bits_.radius();
  for (Coord y = -r; y <= r; ++y) {
    for (Coord x = -r; x <= r; ++x) {
      if (bits_.test({x, y})) out.push_back({x, y});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

OracleProcess::OracleProcess(GrowthFunction f, Coord window_radius, OracleOptions options)
    : f_(std::move(f)), options_(options), burned_([&] {
        const Count side = 2 * window_radius + 1;
        const Count copies = options.provenance ? 2 : 1;
        if (side > 0 && side > options.cell_budget / side / copies) {
          throw std::invalid_argument("oracle window of " + std::to_string(side) + "^2 cells exceeds the cell budget " +
                                      std::to_string(options.cell_budget));
        }
        return window_radius;
      }()) {}

void OracleProcess::begin_turn() {
  ++turn_;
  const Coord radius = f_(turn_);
  if (turn_ > 1) require_non_decreasing(f_, turn_, box_.radius, radius);
  box_ = Box{radius};
}

void OracleProcess::spread() {
  burned_.spread(box_);
  for (auto& [t, cells] : per_activation_) cells->spread(box_);
}

Action OracleProcess::activate(const Action& action) {
  const Action applied = admit_action(action, turn_, box_, options_.policy, &clamps_);
  if (applied.is_pass()) return applied;
  burned_.add(*applied.burn);
  if (options_.provenance) {
    auto own = std::make_unique<CellSet>(burned_.window_radius());
    own->add(*applied.burn);
    per_activation_.emplace_back(turn_, std::move(own));
  }
  return applied;
}

void OracleProcess::step(const Action& action) {
  begin_turn();
  spread();
  activate(action);
}

const CellSet* OracleProcess::provenance(Turn activation_turn) const {
  if (!options_.provenance) throw std::logic_error("provenance tracking was not enabled");
  for (const auto& [t, cells] : per_activation_) {
    if (t == activation_turn) return cells.get();
  }
  return nullptr;
}

GeometricProcess::GeometricProcess(GrowthFunction f, BoxPolicy policy) : f_(std::move(f)), policy_(policy) {
  if (!f_.strictly_increasing()) {
    throw std::invalid_argument("geometric backend needs a strictly increasing growth function; " + f_.describe() +
                                " is not (use repaired(...) or the oracle backend)");
  }
}

void GeometricProcess::step(const Action& action) {
  ++turn_;
  box_ = Box{f_(turn_)};
  const Action applied = admit_action(action, turn_, box_, policy_, &clamps_);
  if (!applied.is_pass()) records_.push_back({turn_, *applied.burn});
}

UnionCount GeometricProcess::burned_count(const CountMode& mode) const {
  return burned_count_geometric(records_, turn_, f_, mode);
}

UnionCount burned_count_geometric(std::span<const ActivationRecord> records, Turn t, const GrowthFunction& f,
                                  const CountMode& mode) {
  if (!f.strictly_increasing()) {
    throw std::invalid_argument("geometric counting needs a strictly increasing growth function");
  }
  std::vector<Diamond> diamonds;
  diamonds.reserve(records.size());
  for (const ActivationRecord& r : records) {
    if (r.turn > t) {
      throw std::invalid_argument("activation at turn " + std::to_string(r.turn) + " is later than t = " +
                                  std::to_string(t));
    }
    diamonds.push_back({r.point, t - r.turn});
  }
  return union_card(diamonds, Box{f(t)}, mode);
}

Coord oracle_window_radius(const GrowthFunction& f, const ActivatorSequence& strategy, Turn horizon,
                           BoxPolicy policy) {
  Coord reach = 0;
  bool any = false;
  for (Turn t = 1; t <= horizon; ++t) {
    const Action applied = admit_action(strategy.action(t), t, Box{f(t)}, policy);
    if (applied.is_pass()) continue;
    any = true;
    reach = std::max(reach, linf_norm(*applied.burn) + (horizon - t));
  }
  return any ? std::min(reach, f(horizon)) : 0;
}

DensityTrace run(const GrowthFunction& f, const ActivatorSequence& strategy, Turn horizon,
                 std::span<const Turn> checkpoints, Backend backend, const CountMode& count_mode,
                 const RunOptions& options) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > horizon || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw std::invalid_argument("checkpoints must be strictly increasing within [1, horizon]");
    }
  }
  (void)Box{f(horizon)}.cardinality();

  DensityTrace trace;
  trace.meta.growth = f.describe();
  trace.meta.strategy = strategy.describe();
  trace.meta.backend = backend == Backend::Oracle ? "oracle" : "geometric";
  if (const auto* sampled = std::get_if<SampledCount>(&count_mode)) trace.meta.seed = sampled->seed;

  const auto record = [&](Turn t, const UnionCount& count) {
    TraceEntry e;
    e.t = t;
    e.total = Box{f(t)}.cardinality();
    e.burned = count.exact ? *count.exact : static_cast<Count>(std::llround(count.value));
    e.density = count.value / static_cast<double>(e.total);
    e.sampled = !count.exact.has_value();
    if (count.ci_halfwidth && e.sampled) e.ci_halfwidth = *count.ci_halfwidth / static_cast<double>(e.total);
    trace.entries.push_back(e);
  };

  std::size_t next = 0;
  if (backend == Backend::Oracle) {
    const Coord window = oracle_window_radius(f, strategy, horizon, options.policy);
    OracleProcess process(f, window, {options.policy, false, options.cell_budget});
    for (Turn t = 1; t <= horizon && next < checkpoints.size(); ++t) {
      process.step(strategy.action(t));
      if (t == checkpoints[next]) {
        const Count burned = process.burned_count();
        record(t, {static_cast<double>(burned), burned, std::nullopt});
        ++next;
      }
    }
    trace.clamps = process.clamps();
  } else {
    GeometricProcess process(f, options.policy);
    for (Turn t = 1; t <= horizon && next < checkpoints.size(); ++t) {
      process.step(strategy.action(t));
      if (t == checkpoints[next]) {
        CountMode mode = count_mode;
        if (auto* sampled = std::get_if<SampledCount>(&mode)) {
          sampled->seed ^= static_cast<std::uint64_t>(t) * 0x9E3779B97F4A7C15ull;
        }
        record(t, process.burned_count(mode));
        ++next;
      }
    }
    trace.clamps = process.clamps();
  }
  return trace;
}

BackendComparison compare_backends(const GrowthFunction& f, const ActivatorSequence& strategy, Turn horizon,
                                   const RunOptions& options) {
  const Coord window = oracle_window_radius(f, strategy, horizon, options.policy);
  OracleProcess oracle(f, window, {options.policy, false, options.cell_budget});
  GeometricProcess geometric(f, options.policy);
  BackendComparison result;
  for (Turn t = 1; t <= horizon; ++t) {
    const Action a = strategy.action(t);
    oracle.step(a);
    geometric.step(a);
    const Count exact = *geometric.burned_count().exact;
    result.turns_checked = t;
    result.oracle_count = oracle.burned_count();
    result.geometric_count = exact;
    if (exact != oracle.burned_count()) {
      result.agree = false;
      result.first_mismatch = t;
      break;
    }
  }
  return result;
}

void write_trace_csv(const DensityTrace& trace, std::ostream& out) {
  out << "# growth=" << trace.meta.growth << '\n';
  out << "# strategy=" << trace.meta.strategy << '\n';
  out << "# backend=" << trace.meta.backend << '\n';
  if (trace.meta.seed) out << "# seed=" << *trace.meta.seed << '\n';
  out << kTraceHeader << '\n';
  for (const TraceEntry& e : trace.entries) {
    out << e.t << ',' << e.burned << ',' << e.total << ',' << format_double(e.density) << ','
        << (e.sampled ? "sampled" : "exact") << ',';
    if (e.ci_halfwidth) out << format_double(*e.ci_halfwidth);
    out << '\n';
  }
}

DensityTrace read_trace_csv(std::istream& in) {
  DensityTrace trace;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  const auto fail = [&](const std::string& what) {
    throw std::invalid_argument("trace line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen && line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const std::string value = line.substr(eq + 1);
      if (key == "growth") trace.meta.growth = value;
      if (key == "strategy") trace.meta.strategy = value;
      if (key == "backend") trace.meta.backend = value;
      if (key == "seed") trace.meta.seed = std::stoull(value);
      continue;
    }
    if (!header_seen) {
      if (line != kTraceHeader) fail("expected header '" + std::string(kTraceHeader) + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (fields.size() != 6) fail("expected 6 fields, got " + std::to_string(fields.size()));
    TraceEntry e;
    try {
      std::size_t used = 0;
      e.t = std::stoll(fields[0], &used);
      if (used != fields[0].size()) fail("bad t");
      e.burned = std::stoll(fields[1], &used);
      if (used != fields[1].size()) fail("bad burned");
      e.total = std::stoll(fields[2], &used);
      if (used != fields[2].size()) fail("bad total");
      e.density = std::stod(fields[3], &used);
      if (used != fields[3].size()) fail("bad density");
      if (fields[4] == "exact") {
        e.sampled = false;
      } else if (fields[4] == "sampled") {
        e.sampled = true;
      } else {
        fail("mode must be 'exact' or 'sampled'");
      }
      if (!fields[5].empty()) e.ci_halfwidth = std::stod(fields[5]);
    } catch (const std::invalid_argument& err) {
      if (std::string_view(err.what()).rfind("trace line", 0) == 0) throw;
      fail("non-numeric field");
    } catch (const std::out_of_range&) {
      fail("numeric field out of range");
    }
    if (!trace.entries.empty() && e.t <= trace.entries.back().t) fail("turns must be strictly increasing");
    trace.entries.push_back(e);
  }
  if (!header_seen) throw std::invalid_argument("trace has no header row");
  return trace;
}

}  // namespace burngrid
