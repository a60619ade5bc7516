#include "burngrid/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace burngrid {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::size_t tail_start(std::size_t n, const Rational& fraction) {
  if (fraction.num() <= 0 || fraction > Rational(1)) throw std::invalid_argument("window fraction must lie in (0, 1]");
  const auto take = static_cast<std::size_t>(
      (static_cast<__int128>(n) * fraction.num() + fraction.den() - 1) / fraction.den());
  return n - std::max<std::size_t>(1, std::min(take, n));
}

}  // namespace

std::string to_string(EndpointCase c) {
  switch (c) {
    case EndpointCase::Trivial:
      return "trivial";
    case EndpointCase::Linear:
      return "linear";
    case EndpointCase::Intermediate:
      return "intermediate";
    case EndpointCase::Cubic:
      return "cubic";
    case EndpointCase::Vanishing:
      return "vanishing";
  }
  return "unknown";
}

std::string EndpointTable::str() const {
  if (singleton()) return "{" + fmt(lo) + "}";
  return "[" + fmt(lo) + ", " + fmt(hi) + "]";
}

double cubic_density(const Rational& c) {
  const long double root6 = std::sqrt(6.0L);
  const long double x = 1.0L + root6 * static_cast<long double>(c.num()) / static_cast<long double>(c.den());
  return static_cast<double>(1.0L / (x * x));
}

EndpointTable theoretical_endpoints(const Rational& c, const Rational& alpha) {
  if (c.num() <= 0) throw std::invalid_argument("c must be positive");
  if (alpha.num() <= 0) throw std::invalid_argument("alpha must be positive");
  EndpointTable e{c, alpha};
  const Rational one(1);
  const Rational cubic(3, 2);
  if (alpha < one || (alpha == one && c < one)) {
    e.kind = EndpointCase::Trivial;
    e.lo = e.hi = 1.0;
  } else if (alpha == one) {
    e.kind = EndpointCase::Linear;
    const long double cd = static_cast<long double>(c.num()) / static_cast<long double>(c.den());
    e.lo = static_cast<double>(1.0L / (2.0L * cd * cd));
    e.hi = 1.0;
  } else if (alpha < cubic) {
    e.kind = EndpointCase::Intermediate;
    e.lo = 0.0;
    e.hi = 1.0;
  } else if (alpha == cubic) {
    e.kind = EndpointCase::Cubic;
    e.lo = 0.0;
    e.hi = cubic_density(c);
  } else {
    e.kind = EndpointCase::Vanishing;
    e.lo = e.hi = 0.0;
  }
  return e;
}

Count burn_cap(Turn t) {
  if (t < 0) throw std::invalid_argument("burn cap needs t >= 0");
  const __int128 v = (2 * static_cast<__int128>(t) * t * t + t) / 3;
  if (v > std::numeric_limits<Count>::max()) return std::numeric_limits<Count>::max();
  return static_cast<Count>(v);
}

DensityVerdict tail_density(const DensityTrace& trace, const Rational& window_fraction) {
  if (trace.entries.empty()) throw std::invalid_argument("tail density of an empty trace");
  const std::size_t first = tail_start(trace.entries.size(), window_fraction);
  DensityVerdict v;
  v.check = "tail-density";
  v.window_first = trace.entries[first].t;
  v.window_last = trace.entries.back().t;
  v.tail_min = std::numeric_limits<double>::infinity();
  v.tail_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i < trace.entries.size(); ++i) {
    v.tail_min = std::min(v.tail_min, trace.entries[i].density);
    v.tail_max = std::max(v.tail_max, trace.entries[i].density);
  }
  v.pass = true;
  return v;
}

DensityVerdict cubic_upper_bound_check(const DensityTrace& trace, const Rational& c, double slack_coeff) {
  DensityVerdict v = tail_density(trace);
  v.check = "cubic-bound";
  v.slack = slack_coeff;
  const double limit = cubic_density(c);
  v.target_lo = 0.0;
  v.target_hi = limit;
  v.pass = true;
  double needed = -std::numeric_limits<double>::infinity();
  for (const TraceEntry& e : trace.entries) {
    const double root = std::sqrt(static_cast<double>(e.t));
    const double bound = limit + slack_coeff / root;
    const double used = (e.density - limit) * root;
    if (used > needed) {
      needed = used;
      v.worst_turn = e.t;
    }
    if (e.density > bound) {
      if (v.pass) v.detail = "density " + fmt(e.density) + " exceeds bound " + fmt(bound) + " at t=" + std::to_string(e.t);
      v.pass = false;
    }
  }
  needed = std::max(needed, 0.0);
  v.worst = needed;
  if (v.pass) v.detail = "largest slack coefficient used " + fmt(needed) + " of " + fmt(slack_coeff);
  return v;
}

DensityVerdict burn_cap_check(const DensityTrace& trace) {
  DensityVerdict v = trace.entries.empty() ? DensityVerdict{} : tail_density(trace);
  v.check = "burn-cap";
  v.pass = true;
  double worst = 0.0;
  for (const TraceEntry& e : trace.entries) {
    if (e.sampled) throw std::invalid_argument("burn-cap check needs exact counts; t=" + std::to_string(e.t) + " is sampled");
    const Count cap = burn_cap(e.t);
    const double ratio = cap > 0 ? static_cast<double>(e.burned) / static_cast<double>(cap) : 0.0;
    if (ratio >= worst) {
      worst = ratio;
      v.worst_turn = e.t;
    }
    if (e.burned > cap) {
      if (v.pass) v.detail = "burned " + std::to_string(e.burned) + " exceeds cap " + std::to_string(cap) + " at t=" + std::to_string(e.t);
      v.pass = false;
    }
  }
  v.worst = worst;
  if (v.pass) v.detail = "largest burned/cap ratio " + fmt(worst);
  return v;
}

DensityVerdict tail_band_check(const DensityTrace& trace, double lo, double hi, const Rational& window_fraction) {
  DensityVerdict v = tail_density(trace, window_fraction);
  v.check = "tail-band";
  v.target_lo = lo;
  v.target_hi = hi;
  v.pass = v.tail_min >= lo && v.tail_max <= hi;
  v.detail = "tail [" + fmt(v.tail_min) + ", " + fmt(v.tail_max) + "] over t in [" + std::to_string(v.window_first) +
             ", " + std::to_string(v.window_last) + "] against [" + fmt(lo) + ", " + fmt(hi) + "]";
  return v;
}

DensityVerdict tail_vs_endpoint(const DensityTrace& trace, double target, double tolerance,
                                const Rational& window_fraction) {
  DensityVerdict v = tail_band_check(trace, target - tolerance, target + tolerance, window_fraction);
  v.check = "tail-vs-endpoint";
  v.slack = tolerance;
  v.worst = std::max(std::abs(v.tail_min - target), std::abs(v.tail_max - target));
  return v;
}

nlohmann::json verdict_to_json(const DensityVerdict& v) {
  nlohmann::json j{{"check", v.check},
                   {"pass", v.pass},
                   {"tail_min", v.tail_min},
                   {"tail_max", v.tail_max},
                   {"tail_window", {v.window_first, v.window_last}},
                   {"slack", v.slack},
                   {"detail", v.detail}};
  if (v.target_lo && v.target_hi) j["target"] = {*v.target_lo, *v.target_hi};
  if (v.worst) j["worst"] = *v.worst;
  if (v.worst_turn) j["worst_turn"] = *v.worst_turn;
  return j;
}

nlohmann::json endpoints_to_json(const EndpointTable& e) {
  return {{"c", e.c.str()}, {"alpha", e.alpha.str()}, {"case", to_string(e.kind)}, {"lo", e.lo}, {"hi", e.hi},
          {"text", e.str()}};
}

}  // namespace burngrid
