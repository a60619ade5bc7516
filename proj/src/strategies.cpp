#include "burngrid/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace burngrid {

namespace {

using i128 = __int128;

// floor(sqrt(x)) for x >= 0.
Count isqrt(Count x) {
  if (x < 0) throw std::invalid_argument("isqrt of a negative value");
  auto g = static_cast<Count>(std::sqrt(static_cast<long double>(x)));
  while (g > 0 && static_cast<i128>(g) * g > x) --g;
  while (static_cast<i128>(g + 1) * (g + 1) <= x) ++g;
  return g;
}

// ceil(x^{1/3}) for x >= 1.
Count icbrt_ceil(Count x) {
  auto g = static_cast<Count>(std::cbrt(static_cast<long double>(x)));
  while (g > 1 && static_cast<i128>(g - 1) * (g - 1) * (g - 1) >= x) --g;
  while (static_cast<i128>(g) * g * g < x) ++g;
  return g;
}

// floor(t^{1/4}).
Count iroot4(Count t) {
  Count g = isqrt(isqrt(t));
  while (static_cast<i128>(g + 1) * (g + 1) * (g + 1) * (g + 1) <= t) ++g;
  return g;
}

// Number of i >= 0 with i^2 * a < bound.
Count count_below(Count a, i128 bound) {
  auto g = static_cast<Count>(std::sqrt(static_cast<long double>(bound) / static_cast<long double>(a)));
  while (g > 0 && static_cast<i128>(g) * g * a >= bound) --g;
  while (static_cast<i128>(g + 1) * (g + 1) * a < bound) ++g;
  return g + 1;
}

LatticePoint shifted(LatticePoint p, LatticePoint by) { return {p.x + by.x, p.y + by.y}; }

class ConstantOriginSeq final : public ActivatorSequence {
 public:
  explicit ConstantOriginSeq(std::string d) : description_(std::move(d)) {}
  Action action(Turn) const override { return Action::at({0, 0}); }
  std::string describe() const override { return description_; }

 private:
  std::string description_;
};

class ScriptedSeq final : public ActivatorSequence {
 public:
  ScriptedSeq(std::vector<std::optional<LatticePoint>> actions, std::string d)
      : actions_(std::move(actions)), description_(std::move(d)) {}
  Action action(Turn t) const override {
    if (t < 1 || t > static_cast<Turn>(actions_.size())) return Action::pass();
    return {actions_[static_cast<std::size_t>(t - 1)]};
  }
  std::string describe() const override { return description_; }

 private:
  std::vector<std::optional<LatticePoint>> actions_;
  std::string description_;
};

class TilingSeq final : public ActivatorSequence {
 public:
  TilingSeq(TilingIndex index, LatticePoint origin, std::string d)
      : index_(index), origin_(origin), description_(std::move(d)) {}
  Action action(Turn t) const override {
    if (t < 1 || t > index_.size()) return Action::pass();
    return Action::at(shifted(index_.floored(t - 1), origin_));
  }
  std::string describe() const override { return description_; }
  std::vector<Turn> phase_ends(Turn horizon) const override {
    if (index_.size() > horizon) return {};
    return {index_.size()};
  }

 private:
  TilingIndex index_;
  LatticePoint origin_;
  std::string description_;
};

class FullBurnSeq final : public ActivatorSequence {
 public:
  FullBurnSeq(GrowthFunction f, std::string d) : f_(std::move(f)), description_(std::move(d)) {
    if (!f_.strictly_increasing()) {
      throw std::invalid_argument("full-burn strategy needs a strictly increasing growth function; " + f_.describe() +
                                  " is not");
    }
    epochs_.push_back(full_burn_epoch(f_, 1));
  }

  Action action(Turn t) const override {
    if (t < 1) return Action::pass();
    const FullBurnEpoch e = epoch_containing(t);
    if (t <= e.start) return Action::pass();
    const Count m = t - e.start - 1;
    if (m >= e.centers) return Action::pass();
    return Action::at(e.center(m));
  }

  std::string describe() const override { return description_; }

  std::vector<Turn> phase_ends(Turn horizon) const override {
    std::vector<Turn> ends;
    if (horizon < 2) return ends;
    epoch_containing(horizon);
    std::lock_guard lock(mutex_);
    for (const FullBurnEpoch& e : epochs_) {
      if (e.end() <= horizon) ends.push_back(e.end());
    }
    return ends;
  }

 private:
  FullBurnEpoch epoch_containing(Turn t) const {
    std::lock_guard lock(mutex_);
    while (epochs_.back().end() < t) epochs_.push_back(full_burn_epoch(f_, epochs_.back().end()));
    auto it = std::lower_bound(epochs_.begin(), epochs_.end(), t,
                               [](const FullBurnEpoch& e, Turn turn) { return e.end() < turn; });
    return *it;
  }

  GrowthFunction f_;
  std::string description_;
  mutable std::mutex mutex_;
  mutable std::vector<FullBurnEpoch> epochs_;
};

class PhaseSeq final : public ActivatorSequence {
 public:
  PhaseSeq(Rational c, std::string d) : c_(c), description_(std::move(d)) {
    if (c_.num() <= 0) throw std::invalid_argument("phase strategy needs c > 0");
  }

  Action action(Turn t) const override {
    if (t < 1) return Action::pass();
    const Count i = iroot4(t) - 1;
    const Cached& phase = layout(i);
    const Count m = t - phase.layout.first;
    const auto which = static_cast<std::size_t>(m % 4);
    const Count k = m / 4;
    if (which >= phase.indices.size() || !phase.indices[which] || k >= phase.indices[which]->size()) {
      return Action::pass();
    }
    return Action::at(shifted(phase.indices[which]->floored(k), phase.layout.rectangles[which].origin));
  }

  std::string describe() const override { return description_; }

  std::vector<Turn> phase_ends(Turn horizon) const override {
    std::vector<Turn> ends;
    for (Count i = 0;; ++i) {
      const Turn end = phase_boundary(i + 2) - 1;
      if (end > horizon) break;
      ends.push_back(end);
    }
    return ends;
  }

 private:
  struct Cached {
    PhaseLayout layout;
    std::vector<std::optional<TilingIndex>> indices;
  };

  const Cached& layout(Count i) const {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(i);
    if (it == cache_.end()) {
      Cached entry{phase_layout(c_, i), {}};
      for (const PhaseRectangle& rect : entry.layout.rectangles) {
        if (rect.width >= 1 && rect.height >= 1 && entry.layout.budget >= 1) {
          entry.indices.emplace_back(TilingIndex(rect.width, rect.height, entry.layout.budget));
        } else {
          entry.indices.emplace_back(std::nullopt);
        }
      }
      it = cache_.emplace(i, std::move(entry)).first;
    }
    return it->second;
  }

  Rational c_;
  std::string description_;
  mutable std::mutex mutex_;
  mutable std::map<Count, Cached> cache_;
};

class DelaySeq final : public ActivatorSequence {
 public:
  DelaySeq(std::shared_ptr<const ActivatorSequence> base, Turn k, std::string d)
      : base_(std::move(base)), k_(k), description_(std::move(d)) {}
  Action action(Turn t) const override { return t <= k_ ? Action::pass() : base_->action(t - k_); }
  std::string describe() const override { return description_; }
  std::vector<Turn> phase_ends(Turn horizon) const override {
    std::vector<Turn> ends;
    if (horizon <= k_) return ends;
    for (Turn e : base_->phase_ends(horizon - k_)) ends.push_back(e + k_);
    return ends;
  }

 private:
  std::shared_ptr<const ActivatorSequence> base_;
  Turn k_;
  std::string description_;
};

class TrimSeq final : public ActivatorSequence {
 public:
  TrimSeq(std::shared_ptr<const ActivatorSequence> base, Turn k, std::string d)
      : base_(std::move(base)), k_(k), description_(std::move(d)) {}
  Action action(Turn t) const override { return t <= k_ ? Action::pass() : base_->action(t); }
  std::string describe() const override { return description_; }
  std::vector<Turn> phase_ends(Turn horizon) const override { return base_->phase_ends(horizon); }

 private:
  std::shared_ptr<const ActivatorSequence> base_;
  Turn k_;
  std::string description_;
};

class PerturbSeq final : public ActivatorSequence {
 public:
  PerturbSeq(std::shared_ptr<const ActivatorSequence> base, spec::Perturb p, GrowthFunction f, std::string d)
      : base_(std::move(base)), p_(std::move(p)), f_(std::move(f)), description_(std::move(d)) {}
  Action action(Turn t) const override {
    const Action a = base_->action(t);
    if (a.is_pass()) return a;
    const auto it = p_.offsets.find(t);
    const LatticePoint offset = it == p_.offsets.end() ? p_.default_offset : it->second;
    return Action::at(Box{f_(t)}.clamp(shifted(*a.burn, offset)));
  }
  std::string describe() const override { return description_; }
  std::vector<Turn> phase_ends(Turn horizon) const override { return base_->phase_ends(horizon); }

 private:
  std::shared_ptr<const ActivatorSequence> base_;
  spec::Perturb p_;
  GrowthFunction f_;
  std::string description_;
};

class ReuseSeq final : public ActivatorSequence {
 public:
  ReuseSeq(std::shared_ptr<const ActivatorSequence> base, std::string d)
      : base_(std::move(base)), description_(std::move(d)) {}
  Action action(Turn t) const override { return base_->action(t); }
  std::string describe() const override { return description_; }
  std::vector<Turn> phase_ends(Turn horizon) const override { return base_->phase_ends(horizon); }

 private:
  std::shared_ptr<const ActivatorSequence> base_;
  std::string description_;
};

// Emits the base's actions in order; a Burn outside the current box is held
// (Pass) until the box has grown to contain it.
class WaitAdaptSeq final : public ActivatorSequence {
 public:
  WaitAdaptSeq(std::shared_ptr<const ActivatorSequence> base, GrowthFunction f, std::string d)
      : base_(std::move(base)), f_(std::move(f)), description_(std::move(d)) {}

  Action action(Turn t) const override {
    if (t < 1) return Action::pass();
    std::lock_guard lock(mutex_);
    while (static_cast<Turn>(emitted_.size()) < t) {
      const Turn now = static_cast<Turn>(emitted_.size()) + 1;
      const Box box{f_(now)};
      const Action next = base_->action(next_);
      if (next.is_pass() || box.contains(*next.burn)) {
        emitted_.push_back(next);
        ++next_;
      } else if (now == 1) {
        emitted_.push_back(Action::at({0, 0}));
      } else {
        emitted_.push_back(Action::pass());
      }
    }
    return emitted_[static_cast<std::size_t>(t - 1)];
  }

  std::string describe() const override { return description_; }

 private:
  std::shared_ptr<const ActivatorSequence> base_;
  GrowthFunction f_;
  std::string description_;
  mutable std::mutex mutex_;
  mutable std::vector<Action> emitted_;
  mutable Turn next_ = 1;
};

}  // namespace

TilingIndex::TilingIndex(Count w, Count l, Count budget, bool truncate) : w_(w), l_(l), budget_(budget) {
  if (w < 1 || l < 1) throw std::invalid_argument("tiling rectangle needs w, l >= 1");
  if (budget < 1) throw std::invalid_argument("tiling budget must be at least 1");
  // i*r < w  <=>  i^2 * l < 2 * budget * w
  columns_ = count_below(l, static_cast<i128>(2) * budget * w);
  rows_ = count_below(w, static_cast<i128>(2) * budget * l);
  total_ = (rows_ / 2) * columns_ + (rows_ % 2) * (columns_ / 2);
  size_ = truncate ? std::min(total_, budget) : total_;
}

double TilingIndex::r() const {
  return std::sqrt(static_cast<double>(w_) * static_cast<double>(l_) / (2.0 * static_cast<double>(budget_)));
}

std::pair<Count, Count> TilingIndex::index(Count k) const {
  if (k < 0 || k >= size_) throw std::out_of_range("tiling centre index out of range");
  const Count even_row = columns_ / 2;
  const Count q = k / columns_;
  const Count rem = k % columns_;
  if (rem < even_row) return {2 * rem + 1, 2 * q};
  return {2 * (rem - even_row), 2 * q + 1};
}

Count TilingIndex::floor_scaled(Count i) const {
  // floor(r*i) = isqrt(floor(i^2 * w * l / (2 * budget)))
  const i128 scaled = static_cast<i128>(i) * i * w_ * l_ / (static_cast<i128>(2) * budget_);
  return isqrt(static_cast<Count>(scaled));
}

LatticePoint TilingIndex::floored(Count k) const {
  const auto [i, j] = index(k);
  return {floor_scaled(i), floor_scaled(j)};
}

TilingPlan rectangle_tiling(Count w, Count l, Count budget, bool truncate) {
  const TilingIndex index(w, l, budget, truncate);
  TilingPlan plan;
  plan.w = w;
  plan.l = l;
  plan.budget = budget;
  plan.r_squared = index.r_squared();
  plan.r = index.r();
  plan.truncated = index.truncated();
  plan.lattice_size = index.total();
  for (Count k = 0; k < index.size(); ++k) {
    const auto ij = index.index(k);
    plan.indices.push_back(ij);
    plan.centers.push_back({plan.r * static_cast<double>(ij.first), plan.r * static_cast<double>(ij.second)});
    plan.floored_centers.push_back(index.floored(k));
  }
  return plan;
}

LatticePoint FullBurnEpoch::center(Count m) const {
  if (m < 0 || m >= centers) throw std::out_of_range("full-burn centre index out of range");
  const Count per_pair = last_index + 1;
  const Count even_row = per_pair / 2;
  const Count q = m / per_pair;
  const Count rem = m % per_pair;
  Count i = 0;
  Count j = 0;
  if (rem < even_row) {
    i = 2 * rem + 1;
    j = 2 * q;
  } else {
    i = 2 * (rem - even_row);
    j = 2 * q + 1;
  }
  const Coord top = 2 * radius;
  return {-radius + std::min(i * tile, top), -radius + std::min(j * tile, top)};
}

FullBurnEpoch full_burn_epoch(const GrowthFunction& f, Turn start) {
  FullBurnEpoch e;
  e.start = start;
  e.radius = f(start);
  const Count side = 2 * e.radius + 1;
  e.tile = icbrt_ceil(side * side);
  e.last_index = (side - 1 + e.tile - 1) / e.tile;
  e.centers = (e.last_index + 1) * (e.last_index + 1) / 2;
  e.tau = e.centers + e.tile;
  return e;
}

Turn phase_boundary(Count i) { return i * i * i * i; }

PhaseLayout phase_layout(const Rational& c, Count i) {
  if (i < 0) throw std::invalid_argument("phase index must be non-negative");
  PhaseLayout p;
  p.index = i;
  p.first = phase_boundary(i + 1);
  p.last = phase_boundary(i + 2) - 1;
  p.budget = i * i * i;
  if (i == 0) return p;
  const Rational alpha(3, 2);
  const Coord near = power_ceil_eval(c, alpha, phase_boundary(i));
  const Coord far = power_ceil_eval(c, alpha, phase_boundary(i + 1) - 1);
  p.w = 2 * near;
  p.l = far - near;
  p.rectangles = {
      {'U', {-near, near + 1}, p.w, p.l},
      {'L', {-far, -near}, p.l, p.w},
      {'R', {near + 1, -near}, p.l, p.w},
      {'D', {-near, -far}, p.w, p.l},
  };
  return p;
}

namespace spec {
bool operator==(const Transformed& a, const Transformed& b) {
  if (!(a.transform == b.transform)) return false;
  if (!a.base || !b.base) return a.base == b.base;
  return *a.base == *b.base;
}
}  // namespace spec

StrategySpec constant_origin() { return {spec::ConstantOrigin{}}; }
StrategySpec scripted(std::vector<std::optional<LatticePoint>> actions) { return {spec::Scripted{std::move(actions)}}; }
StrategySpec full_burn_strategy(std::optional<std::string> growth) { return {spec::FullBurn{std::move(growth)}}; }
StrategySpec rectangle_tiling_strategy(Count w, Count l, Count budget, LatticePoint origin) {
  return {spec::RectangleTiling{w, l, budget, origin}};
}
StrategySpec phase_strategy(Rational c) { return {spec::Phase{c}}; }

namespace {
StrategySpec wrap(StrategySpec base, spec::Transform t) {
  return {spec::Transformed{std::make_shared<const StrategySpec>(std::move(base)), std::move(t)}};
}
}  // namespace

StrategySpec delay(StrategySpec base, Turn k) { return wrap(std::move(base), spec::Delay{k}); }
StrategySpec trim(StrategySpec base, Turn k) { return wrap(std::move(base), spec::Trim{k}); }
StrategySpec perturb(StrategySpec base, Coord d, std::map<Turn, LatticePoint> offsets, LatticePoint default_offset) {
  return wrap(std::move(base), spec::Perturb{d, std::move(offsets), default_offset});
}
StrategySpec reuse_scaled(StrategySpec base, std::string base_growth) {
  return wrap(std::move(base), spec::ReuseScaled{std::move(base_growth)});
}
StrategySpec wait_adapt(StrategySpec base) { return wrap(std::move(base), spec::WaitAdapt{}); }

StrategySpec phase_for_density(double rho, const Rational& c) {
  const double cd = c.to_double();
  const double top = 1.0 / ((1.0 + std::sqrt(6.0) * cd) * (1.0 + std::sqrt(6.0) * cd));
  if (!(rho > 0.0) || rho > top * (1.0 + 1e-12)) {
    throw std::invalid_argument("target density must lie in (0, (1+sqrt(6)c)^-2]");
  }
  const double root = std::sqrt(rho);
  const double scaled = root * cd / (1.0 - std::sqrt(6.0) * cd * root);
  Rational c_base = c;
  if (scaled < cd * (1.0 - 1e-9)) {
    constexpr std::int64_t kDen = 1'000'000;
    const auto num = static_cast<std::int64_t>(std::floor(scaled * static_cast<double>(kDen)));
    if (num < 1) throw std::invalid_argument("target density too small to represent");
    c_base = Rational(num, kDen);
  }
  // Below c = 1 the scaled growth stalls on early turns.
  const std::string base = "ceil(" + c_base.str() + "*n^3/2)";
  return reuse_scaled(phase_strategy(c_base), c_base < Rational(1) ? "repaired(" + base + ")" : base);
}

namespace {

using nlohmann::json;

json point_json(LatticePoint p) { return json::array({p.x, p.y}); }

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
  throw std::invalid_argument("strategy field '" + path + "': " + what);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) bad_field(path + key, "missing");
  return j.at(key);
}

std::int64_t int_field(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer()) bad_field(path + key, "expected an integer");
  return v.get<std::int64_t>();
}

LatticePoint point_from(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    bad_field(path, "expected [x, y] with integer coordinates");
  }
  return {v[0].get<Coord>(), v[1].get<Coord>()};
}

Rational rational_from(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number()) return Rational::parse(v.dump());
  } catch (const std::invalid_argument& e) {
    bad_field(path, e.what());
  }
  bad_field(path, "expected a rational (number or \"p/q\")");
}

StrategySpec from_json_at(const json& j, const std::string& path) {
  if (!j.is_object()) bad_field(path.empty() ? "(root)" : path, "expected an object");
  const json& kind_value = field(j, "kind", path);
  if (!kind_value.is_string()) bad_field(path + "kind", "expected a string");
  const std::string kind = kind_value.get<std::string>();
  const auto base = [&] { return from_json_at(field(j, "base", path), path + "base."); };

  if (kind == "constant_origin") return constant_origin();
  if (kind == "scripted") {
    const json& list = field(j, "actions", path);
    if (!list.is_array()) bad_field(path + "actions", "expected an array");
    std::vector<std::optional<LatticePoint>> actions;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].is_null()) {
        actions.emplace_back(std::nullopt);
      } else {
        actions.emplace_back(point_from(list[i], path + "actions[" + std::to_string(i) + "]"));
      }
    }
    return scripted(std::move(actions));
  }
  if (kind == "full_burn") {
    if (j.contains("growth")) {
      if (!j["growth"].is_string()) bad_field(path + "growth", "expected a growth spec string");
      return full_burn_strategy(j["growth"].get<std::string>());
    }
    return full_burn_strategy();
  }
  if (kind == "rectangle_tiling") {
    const Count w = int_field(j, "w", path);
    const Count l = int_field(j, "l", path);
    const Count budget = int_field(j, "budget", path);
    if (w < 1) bad_field(path + "w", "must be at least 1");
    if (l < 1) bad_field(path + "l", "must be at least 1");
    if (budget < 1) bad_field(path + "budget", "must be at least 1");
    const LatticePoint origin = j.contains("origin") ? point_from(j["origin"], path + "origin") : LatticePoint{};
    return rectangle_tiling_strategy(w, l, budget, origin);
  }
  if (kind == "phase") {
    const Rational c = rational_from(field(j, "c", path), path + "c");
    if (c.num() <= 0) bad_field(path + "c", "must be positive");
    return phase_strategy(c);
  }
  if (kind == "delay" || kind == "trim") {
    const Turn k = int_field(j, "k", path);
    if (k < 0) bad_field(path + "k", "must be non-negative");
    return kind == "delay" ? delay(base(), k) : trim(base(), k);
  }
  if (kind == "perturb") {
    const Coord d = int_field(j, "d", path);
    if (d < 0) bad_field(path + "d", "must be non-negative");
    std::map<Turn, LatticePoint> offsets;
    if (j.contains("offsets")) {
      const json& list = j["offsets"];
      if (!list.is_array()) bad_field(path + "offsets", "expected an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string at = path + "offsets[" + std::to_string(i) + "].";
        offsets[int_field(list[i], "t", at)] = point_from(field(list[i], "offset", at), at + "offset");
      }
    }
    const LatticePoint fallback =
        j.contains("default_offset") ? point_from(j["default_offset"], path + "default_offset") : LatticePoint{};
    return perturb(base(), d, std::move(offsets), fallback);
  }
  if (kind == "reuse_scaled") {
    const json& g = field(j, "base_growth", path);
    if (!g.is_string()) bad_field(path + "base_growth", "expected a growth spec string");
    return reuse_scaled(base(), g.get<std::string>());
  }
  if (kind == "wait_adapt") return wait_adapt(base());
  bad_field(path + "kind", "unknown strategy kind '" + kind + "'");
}

struct ToJson {
  json operator()(const spec::ConstantOrigin&) const { return {{"kind", "constant_origin"}}; }
  json operator()(const spec::Scripted& s) const {
    json list = json::array();
    for (const auto& a : s.actions) list.push_back(a ? point_json(*a) : json(nullptr));
    return {{"kind", "scripted"}, {"actions", list}};
  }
  json operator()(const spec::FullBurn& s) const {
    json j{{"kind", "full_burn"}};
    if (s.growth) j["growth"] = *s.growth;
    return j;
  }
  json operator()(const spec::RectangleTiling& s) const {
    return {{"kind", "rectangle_tiling"}, {"w", s.w}, {"l", s.l}, {"budget", s.budget}, {"origin", point_json(s.origin)}};
  }
  json operator()(const spec::Phase& s) const { return {{"kind", "phase"}, {"c", s.c.str()}}; }
  json operator()(const spec::Transformed& s) const {
    json j = std::visit(
        [](const auto& t) -> json {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, spec::Delay>) {
            return {{"kind", "delay"}, {"k", t.k}};
          } else if constexpr (std::is_same_v<T, spec::Trim>) {
            return {{"kind", "trim"}, {"k", t.k}};
          } else if constexpr (std::is_same_v<T, spec::Perturb>) {
            json offsets = json::array();
            for (const auto& [turn, off] : t.offsets) offsets.push_back({{"t", turn}, {"offset", point_json(off)}});
            return {{"kind", "perturb"}, {"d", t.d}, {"offsets", offsets}, {"default_offset", point_json(t.default_offset)}};
          } else if constexpr (std::is_same_v<T, spec::ReuseScaled>) {
            return {{"kind", "reuse_scaled"}, {"base_growth", t.base_growth}};
          } else {
            return {{"kind", "wait_adapt"}};
          }
        },
        s.transform);
    j["base"] = strategy_to_json(*s.base);
    return j;
  }
};

std::shared_ptr<const ActivatorSequence> compile_impl(const StrategySpec& s, const GrowthFunction& f, Turn horizon,
                                                      std::vector<std::string>* warnings) {
  const std::string d = strategy_to_json(s).dump();
  if (const auto* p = std::get_if<spec::ConstantOrigin>(&s.kind)) {
    (void)p;
    return std::make_shared<ConstantOriginSeq>(d);
  }
  if (const auto* p = std::get_if<spec::Scripted>(&s.kind)) return std::make_shared<ScriptedSeq>(p->actions, d);
  if (const auto* p = std::get_if<spec::FullBurn>(&s.kind)) {
    return std::make_shared<FullBurnSeq>(p->growth ? GrowthFunction::parse(*p->growth) : f, d);
  }
  if (const auto* p = std::get_if<spec::RectangleTiling>(&s.kind)) {
    return std::make_shared<TilingSeq>(TilingIndex(p->w, p->l, p->budget), p->origin, d);
  }
  if (const auto* p = std::get_if<spec::Phase>(&s.kind)) return std::make_shared<PhaseSeq>(p->c, d);

  const auto& t = std::get<spec::Transformed>(s.kind);
  if (!t.base) throw std::invalid_argument("transformed strategy has no base");
  if (const auto* x = std::get_if<spec::Delay>(&t.transform)) {
    if (x->k < 0) throw std::invalid_argument("delay k must be non-negative");
    return std::make_shared<DelaySeq>(compile_impl(*t.base, f, horizon, warnings), x->k, d);
  }
  if (const auto* x = std::get_if<spec::Trim>(&t.transform)) {
    if (x->k < 0) throw std::invalid_argument("trim k must be non-negative");
    auto base = compile_impl(*t.base, f, horizon, warnings);
    if (warnings != nullptr && horizon > x->k && !first_burn(*base, horizon, x->k + 1)) {
      warnings->push_back("trim(" + std::to_string(x->k) + ") leaves no Burn at or before turn " +
                          std::to_string(horizon));
    }
    return std::make_shared<TrimSeq>(std::move(base), x->k, d);
  }
  if (const auto* x = std::get_if<spec::Perturb>(&t.transform)) {
    if (x->d < 0) throw std::invalid_argument("perturb d must be non-negative");
    const auto check = [&](LatticePoint off, const std::string& where) {
      if (l1_distance(off, {0, 0}) > x->d) {
        throw std::invalid_argument("perturb offset " + where + " has L1 norm " +
                                    std::to_string(l1_distance(off, {0, 0})) + " > d = " + std::to_string(x->d));
      }
    };
    check(x->default_offset, "default");
    for (const auto& [turn, off] : x->offsets) check(off, "at turn " + std::to_string(turn));
    return std::make_shared<PerturbSeq>(compile_impl(*t.base, f, horizon, warnings), *x, f, d);
  }
  if (const auto* x = std::get_if<spec::ReuseScaled>(&t.transform)) {
    const GrowthFunction g = GrowthFunction::parse(x->base_growth);
    if (!g.strictly_increasing() || !f.strictly_increasing()) {
      throw std::invalid_argument("reuse_scaled needs strictly increasing growth functions on both grids");
    }
    for (Turn n = 1; n <= horizon; ++n) {
      if (f(n) < g(n)) {
        throw std::invalid_argument("reuse_scaled: run grid " + f.describe() + " does not dominate " + g.describe() +
                                    " at n = " + std::to_string(n));
      }
    }
    return std::make_shared<ReuseSeq>(compile_impl(*t.base, g, horizon, warnings), d);
  }
  return std::make_shared<WaitAdaptSeq>(compile_impl(*t.base, f, horizon, warnings), f, d);
}

}  // namespace

nlohmann::json strategy_to_json(const StrategySpec& s) { return std::visit(ToJson{}, s.kind); }

StrategySpec strategy_from_json(const nlohmann::json& j) { return from_json_at(j, ""); }

StrategySpec parse_strategy_arg(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first == std::string::npos) throw std::invalid_argument("empty strategy");
  if (text[first] == '{') {
    try {
      return strategy_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument(std::string("strategy JSON: ") + e.what());
    }
  }
  if (text == "constant-origin" || text == "constant") return constant_origin();
  if (text == "full-burn") return full_burn_strategy();
  if (text == "phase") return phase_strategy(Rational(1));
  if (text.rfind("phase:", 0) == 0) return phase_strategy(Rational::parse(text.substr(6)));
  if (std::filesystem::is_regular_file(text)) {
    std::ifstream in(text);
    try {
      return strategy_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument("strategy file '" + text + "': " + e.what());
    }
  }
  throw std::invalid_argument("unknown strategy '" + text +
                              "' (expected constant-origin, full-burn, phase[:c], inline JSON or a JSON file)");
}

std::shared_ptr<const ActivatorSequence> compile(const StrategySpec& s, const GrowthFunction& run_growth,
                                                 Turn horizon, std::vector<std::string>* warnings) {
  auto seq = compile_impl(s, run_growth, horizon, warnings);
  if (warnings != nullptr && !first_burn(*seq, horizon)) {
    warnings->push_back("strategy makes no Burn at or before turn " + std::to_string(horizon) +
                        " (activator sequences must be non-empty)");
  }
  return seq;
}

std::optional<Turn> first_burn(const ActivatorSequence& seq, Turn horizon, Turn from) {
  for (Turn t = std::max<Turn>(from, 1); t <= horizon; ++t) {
    if (!seq.action(t).is_pass()) return t;
  }
  return std::nullopt;
}

}  // namespace burngrid
