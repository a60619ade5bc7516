#pragma once

// Verdicts over density traces: tail windows, endpoint tables, bound checks.

#include <optional>
#include <string>

#include "json.hpp"

#include "burngrid/engine.hpp"
#include "burngrid/rational.hpp"

namespace burngrid {

enum class EndpointCase {
  /// alpha < 1, or alpha = 1 with c < 1: the fire outruns the grid, {1}.
  Trivial,
  /// alpha = 1, c >= 1: [1/(2c^2), 1].
  Linear,
  /// 1 < alpha < 3/2: [0, 1].
  Intermediate,
  /// alpha = 3/2: [0, (1 + sqrt(6) c)^-2].
  Cubic,
  /// alpha > 3/2: {0}.
  Vanishing,
};

struct EndpointTable {
  Rational c;
  Rational alpha;
  EndpointCase kind = EndpointCase::Trivial;
  double lo = 0.0;
  double hi = 0.0;

  bool singleton() const { return lo == hi; }
  /// "{x}" or "[lo, hi]".
  std::string str() const;
};

std::string to_string(EndpointCase c);

/// Throws std::invalid_argument unless c, alpha > 0.
EndpointTable theoretical_endpoints(const Rational& c, const Rational& alpha);

/// (1 + sqrt(6) c)^-2.
double cubic_density(const Rational& c);

/// floor((2t^3 + t) / 3); (2t^3 + t) is always divisible by 3.
Count burn_cap(Turn t);

struct DensityVerdict {
  std::string check;
  double tail_min = 0.0;
  double tail_max = 0.0;
  Turn window_first = 0;
  Turn window_last = 0;
  std::optional<double> target_lo;
  std::optional<double> target_hi;
  double slack = 0.0;
  bool pass = false;
  /// Check-specific figure of merit (largest slack used, worst turn...).
  std::optional<double> worst;
  std::optional<Turn> worst_turn;
  std::string detail;
};

/// min/max density over the last ceil(fraction * N) checkpoints.
/// Throws std::invalid_argument on an empty trace or fraction outside (0, 1].
DensityVerdict tail_density(const DensityTrace& trace, const Rational& window_fraction = Rational(1, 4));

/// density(t) <= (1 + sqrt(6) c)^-2 + slack_coeff / sqrt(t) at every checkpoint.
/// `worst` reports the smallest slack_coeff the trace would have needed.
DensityVerdict cubic_upper_bound_check(const DensityTrace& trace, const Rational& c, double slack_coeff);

/// burned(t) <= (2t^3 + t)/3 at every checkpoint. Throws std::invalid_argument
/// when any entry is sampled.
DensityVerdict burn_cap_check(const DensityTrace& trace);

/// The tail window lies inside [lo, hi].
DensityVerdict tail_band_check(const DensityTrace& trace, double lo, double hi,
                               const Rational& window_fraction = Rational(1, 4));

/// The tail window lies inside [target - tolerance, target + tolerance].
DensityVerdict tail_vs_endpoint(const DensityTrace& trace, double target, double tolerance,
                                const Rational& window_fraction = Rational(1, 4));

nlohmann::json verdict_to_json(const DensityVerdict& v);
nlohmann::json endpoints_to_json(const EndpointTable& e);

}  // namespace burngrid
