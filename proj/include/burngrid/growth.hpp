#pragma once

// Growth functions f: N -> N that set the box radius of the grid at each turn.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "burngrid/geometry.hpp"
#include "burngrid/rational.hpp"

namespace burngrid {

using Turn = std::int64_t;

enum class GrowthFamily { PowerCeil, Tabulated, Pathological, Repaired };

struct PowerParams {
  Rational c;
  Rational alpha;
};

/// Immutable, cheap to copy, safe to evaluate from many threads.
class GrowthFunction {
 public:
  /// ceil(c * n^alpha), evaluated exactly. Throws on non-positive c or alpha.
  static GrowthFunction power_ceil(Rational c, Rational alpha);
  /// values[k] = f(domain_start + k). Throws on empty tables or values < 1.
  static GrowthFunction tabulated(std::vector<Coord> values, Turn domain_start = 1, std::string label = {});
  /// Two-column CSV "n,f" with a header row; n must be consecutive.
  static GrowthFunction load_csv(const std::filesystem::path& path);
  /// f(1) = 1; f(n) = ceil(n^{4/3}) at powers of two, else f(n - 1).
  static GrowthFunction pathological();
  /// Parses the growth-spec mini-grammar:
  ///   ceil(C*n^A) | ceil(C*n) | pathological | tabulated:<path> | repaired(<spec>)
  /// with C and A written as integers, decimals or p/q.
  static GrowthFunction parse(std::string_view spec);

  /// Throws std::out_of_range below domain_start (or past a table's end).
  Coord operator()(Turn n) const;
  Coord eval(Turn n) const { return (*this)(n); }

  GrowthFamily family() const;
  bool strictly_increasing() const;
  Turn domain_start() const;
  /// Last valid argument for tabulated functions (and repairs of them).
  std::optional<Turn> domain_end() const;
  /// Present for the PowerCeil family only.
  std::optional<PowerParams> power_params() const;
  /// Text in the mini-grammar when the function came from it.
  std::string describe() const;

  struct Impl;

 private:
  explicit GrowthFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend GrowthFunction repair_strictly_increasing(const GrowthFunction& g);
};

/// Exact ceil(c * n^alpha) by integer root extraction and exact comparison.
Coord power_ceil_eval(const Rational& c, const Rational& alpha, Turn n);

/// Example-2.7 style function: carries ceil(2^{4k/3}) from n = 2^k until 2^{k+1}.
Coord pathological_eval(Turn n);

/// g+(start) = g(start); g+(n) = max(g(n), g+(n-1) + 1).
GrowthFunction repair_strictly_increasing(const GrowthFunction& g);

struct ProbeConfig {
  double checkpoint_ratio = 1.3;
  Turn first_checkpoint = 16;
  /// Condition (ii) fails when tail ratios exceed 1 + this.
  double sublinear_tolerance = 0.05;
  /// Condition (iii) fails when tail ratios drop below 1 + this.
  double linear_gap = 0.05;
};

struct ProbeRow {
  Turn n = 0;
  /// f(m+1) > f(m) for every m in [n, next checkpoint).
  bool increasing = false;
  /// max over the window of f(m + ceil(m^beta)) / f(m).
  double sublinear_ratio = 0.0;
  /// min over the window of f(m + ceil(c * m)) / f(m).
  double linear_ratio = 0.0;
};

struct GrowthProbeReport {
  static constexpr std::string_view kBanner =
      "HEURISTIC: finite probing cannot certify an asymptotic growth condition";
  std::vector<ProbeRow> rows;
  std::size_t tail_begin = 0;
  double tail_max_sublinear = 0.0;
  double tail_min_linear = 0.0;
  bool flag_increasing = false;
  bool flag_sublinear = false;
  bool flag_linear = false;

  bool any_flag() const { return flag_increasing || flag_sublinear || flag_linear; }
};

/// Samples the three controlled-growth conditions on a geometric checkpoint
/// grid, with epsilon(n) = ceil(n^beta). Throws std::invalid_argument when
/// horizon < 16 or beta is outside (0, 1).
GrowthProbeReport probe_controlled_growth(const GrowthFunction& f, Turn horizon, Rational epsilon_exponent,
                                          Rational c_probe, const ProbeConfig& config = {});

}  // namespace burngrid
