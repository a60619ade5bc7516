#pragma once

// The `burngrid` command line: simulate, verify, probe-growth, endpoints,
// selftest.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "burngrid/engine.hpp"
#include "burngrid/strategies.hpp"

namespace burngrid {

struct CheckpointPlan {
  enum class Kind { Geometric, Explicit, PhaseEnds };
  Kind kind = Kind::Geometric;
  double ratio = 1.25;
  Turn start = 8;
  std::vector<Turn> turns;
};

/// start, ceil(start * ratio), ... up to the horizon, which is always included.
std::vector<Turn> geometric_checkpoints(Turn horizon, double ratio = 1.25, Turn start = 8);

/// "geometric", "geometric:<ratio>", "geometric:<ratio>:<start>", "phase-ends",
/// or a comma-separated turn list.
CheckpointPlan parse_checkpoints(const std::string& text);

/// Resolves a plan against a compiled strategy. Throws std::invalid_argument
/// when the strategy has no phase ends or explicit turns fall outside [1, horizon].
std::vector<Turn> resolve_checkpoints(const CheckpointPlan& plan, const ActivatorSequence& strategy, Turn horizon);

enum class BackendChoice { Oracle, Geometric, Both };

struct RunConfig {
  std::string growth;
  StrategySpec strategy = constant_origin();
  Turn horizon = 0;
  CheckpointPlan checkpoints;
  BackendChoice backend = BackendChoice::Geometric;
  CountMode count_mode = ExactCount{};
  BoxPolicy policy = BoxPolicy::Strict;
  Count cell_budget = 400'000'000;
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> report;
  std::optional<std::filesystem::path> plot;
};

/// Throws std::invalid_argument naming the offending field.
RunConfig run_config_from_json(const nlohmann::json& j);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct BatteryCase {
  std::string growth;
  std::string strategy_name;
  StrategySpec strategy;
};

/// Growths {n, 1.5n, repaired n^{4/3}} crossed with the constructions and
/// their delayed, trimmed and perturbed variants.
std::vector<BatteryCase> equivalence_battery();

/// Returns the process exit status: 0 success, 1 a check or cross-check
/// failed, 2 invalid usage or configuration.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace burngrid
