#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "burngrid/strategies.hpp"
#include "oracles.hpp"

using namespace burngrid;

namespace {

GrowthFunction identity() { return GrowthFunction::power_ceil(Rational(1), Rational(1)); }

std::vector<Turn> all_turns(Turn horizon) {
  std::vector<Turn> out;
  for (Turn t = 1; t <= horizon; ++t) out.push_back(t);
  return out;
}

std::vector<Action> actions_of(const ActivatorSequence& s, Turn horizon) {
  std::vector<Action> out;
  for (Turn t = 1; t <= horizon; ++t) out.push_back(s.action(t));
  return out;
}

}  // namespace

TEST_CASE("tiling examples") {
  SUBCASE("4 x 4 with budget 4") {
    const TilingPlan p = rectangle_tiling(4, 4, 4);
    CHECK(p.r_squared == Rational(2));
    CHECK(p.r == doctest::Approx(std::sqrt(2.0)));
    const std::vector<std::pair<Count, Count>> idx{{1, 0}, {0, 1}, {2, 1}, {1, 2}};
    CHECK(p.indices == idx);
    const std::vector<LatticePoint> floored{{1, 0}, {0, 1}, {2, 1}, {1, 2}};
    CHECK(p.floored_centers == floored);
  }
  SUBCASE("budget truncation keeps the first centre in row-major order") {
    const TilingPlan p = rectangle_tiling(2, 2, 1);
    REQUIRE(p.indices.size() == 1);
    CHECK(p.indices[0] == std::pair<Count, Count>{1, 0});
    CHECK(p.floored_centers[0] == LatticePoint{1, 0});
    const TilingIndex index(2, 2, 1);
    CHECK(index.columns() == 2);
    CHECK(index.rows() == 2);
  }
  SUBCASE("100 x 100 with budget 50") {
    const TilingPlan p = rectangle_tiling(100, 100, 50);
    CHECK(p.r == doctest::Approx(10.0));
    CHECK(p.indices.size() == 50);
    for (const auto& [i, j] : p.indices) {
      CHECK((i + j) % 2 == 1);
      CHECK(i < 10);
      CHECK(j < 10);
    }
    CHECK(p.floored_centers[0] == LatticePoint{10, 0});
  }
  CHECK_THROWS_AS(TilingIndex(0, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(TilingIndex(3, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(TilingIndex(3, 3, 1).index(5), std::out_of_range);
}

TEST_CASE("tiling plan invariants") {
  for (Count w = 1; w <= 40; w += 3) {
    for (Count l = 1; l <= 40; l += 5) {
      for (Count budget : {1, 2, 3, 7, 20, 100}) {
        const TilingPlan p = rectangle_tiling(w, l, budget);
        const double r = std::sqrt(static_cast<double>(w * l) / (2.0 * static_cast<double>(budget)));
        REQUIRE(static_cast<Count>(p.centers.size()) <= budget);
        for (std::size_t a = 0; a < p.indices.size(); ++a) {
          const auto [i, j] = p.indices[a];
          REQUIRE((i + j) % 2 == 1);
          REQUIRE(static_cast<double>(i) * r < static_cast<double>(w) + 1e-9);
          REQUIRE(static_cast<double>(j) * r < static_cast<double>(l) + 1e-9);
          // The floor is exact.
          REQUIRE(p.floored_centers[a].x == oracle::floor_sqrt_ratio(i * i * w * l, 2 * budget));
          REQUIRE(p.floored_centers[a].y == oracle::floor_sqrt_ratio(j * j * w * l, 2 * budget));
          if (a > 0) {
            const auto [pi, pj] = p.indices[a - 1];
            REQUIRE((pj < j || (pj == j && pi < i)));
          }
          for (std::size_t b = 0; b < a; ++b) {
            const double dist = std::abs(p.centers[a].x - p.centers[b].x) + std::abs(p.centers[a].y - p.centers[b].y);
            REQUIRE(dist >= 2.0 * r - 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("tiling balls stay disjoint up to turn floor(r)") {
  for (Count w = 2; w <= 60; w += 7) {
    for (Count l = 2; l <= 60; l += 9) {
      for (Count budget : {1, 3, 8, 25}) {
        if (2 * budget > w * l) continue;
        const TilingPlan p = rectangle_tiling(w, l, budget);
        const auto n = static_cast<long long>(std::floor(p.r));
        std::vector<std::set<oracle::Point>> balls;
        for (std::size_t k = 0; k < p.floored_centers.size(); ++k) {
          const long long activation = static_cast<long long>(k) + 1;
          if (activation > n) break;
          const LatticePoint c = p.floored_centers[k];
          balls.push_back(oracle::rectangle_ball({c.x, c.y}, n - activation, w, l));
        }
        for (std::size_t a = 0; a < balls.size(); ++a) {
          for (std::size_t b = 0; b < a; ++b) {
            for (const auto& q : balls[a]) REQUIRE(balls[b].count(q) == 0);
          }
        }
      }
    }
  }
}

TEST_CASE("tiling covers the inner rectangle by turn ceil(r) + tau") {
  int checked = 0;
  int truncated = 0;
  for (Count w = 2; w <= 60; w += 4) {
    for (Count l = 2; l <= 60; l += 6) {
      for (Count budget : {1, 2, 5, 9, 30}) {
        if (2 * budget > w * l) continue;
        const TilingPlan p = rectangle_tiling(w, l, budget, false);
        if (rectangle_tiling(w, l, budget).truncated) ++truncated;
        std::vector<oracle::Point> centers;
        for (const LatticePoint c : p.floored_centers) centers.push_back({c.x, c.y});
        const auto turns = static_cast<long long>(std::ceil(p.r)) + static_cast<long long>(centers.size());
        const auto burned = oracle::rectangle_union(centers, turns, w, l);
        CAPTURE(w);
        CAPTURE(l);
        CAPTURE(budget);
        for (long long y = 0; static_cast<double>(y) <= static_cast<double>(l) - p.r; ++y) {
          for (long long x = 0; static_cast<double>(x) <= static_cast<double>(w) - p.r; ++x) {
            REQUIRE(burned.count({x, y}) == 1);
          }
        }
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
  CHECK(truncated > 0);
}

TEST_CASE("a truncated tiling can leave the inner rectangle uncovered") {
  const TilingIndex index(2, 14, 5);
  CHECK(index.total() == 9);
  CHECK(index.size() == 5);
  CHECK(index.truncated());
  const TilingPlan p = rectangle_tiling(2, 14, 5);
  CHECK(p.truncated);
  std::vector<oracle::Point> centers;
  for (const LatticePoint c : p.floored_centers) centers.push_back({c.x, c.y});
  const auto turns = static_cast<long long>(std::ceil(p.r)) + static_cast<long long>(centers.size());
  const auto burned = oracle::rectangle_union(centers, turns, 2, 14);
  bool hole = false;
  for (long long y = 0; static_cast<double>(y) <= 14.0 - p.r; ++y) {
    if (!burned.count({0, y})) hole = true;
  }
  CHECK(hole);
  CHECK_FALSE(TilingIndex(4, 4, 4).truncated());
  const TilingPlan full = rectangle_tiling(2, 14, 5, false);
  CHECK_FALSE(full.truncated);
  CHECK(full.floored_centers.size() == 9);
  CHECK(full.lattice_size == 9);
  CHECK(p.lattice_size == 9);
}

TEST_CASE("full-burn epoch arithmetic") {
  const FullBurnEpoch e = full_burn_epoch(identity(), 1);
  CHECK(e.radius == 1);
  CHECK(e.tile == 3);
  CHECK(e.last_index == 1);
  CHECK(e.centers == 2);
  CHECK(e.tau == 5);
  CHECK(e.end() == 6);
  CHECK(e.center(0) == LatticePoint{1, -1});
  CHECK(e.center(1) == LatticePoint{-1, 1});
  CHECK_THROWS_AS(e.center(2), std::out_of_range);

  const auto seq = compile(full_burn_strategy(), identity(), 100);
  CHECK(seq->action(1).is_pass());
  CHECK(seq->action(2) == Action::at({1, -1}));
  CHECK(seq->action(3) == Action::at({-1, 1}));
  for (Turn t = 4; t <= 6; ++t) CHECK(seq->action(t).is_pass());
  const FullBurnEpoch next = full_burn_epoch(identity(), 6);
  CHECK(next.radius == 6);
  CHECK(seq->action(7) == Action::at(next.center(0)));
  const auto ends = seq->phase_ends(100);
  REQUIRE(ends.size() >= 2);
  CHECK(ends[0] == 6);
  CHECK(ends[1] == next.end());
  CHECK_THROWS_AS(compile(full_burn_strategy(), GrowthFunction::pathological(), 10), std::invalid_argument);
}

TEST_CASE("full-burn epochs burn the whole starting grid") {
  for (const std::string g : {"ceil(1*n)", "ceil(3/2*n)", "repaired(ceil(1*n^4/3))", "ceil(1*n^5/4)"}) {
    const auto f = GrowthFunction::parse(g);
    const Turn horizon = 150;
    const auto seq = compile(full_burn_strategy(), f, horizon);
    OracleProcess p(f, f(horizon));
    std::vector<FullBurnEpoch> epochs{full_burn_epoch(f, 1)};
    while (epochs.back().end() <= horizon) epochs.push_back(full_burn_epoch(f, epochs.back().end()));
    epochs.pop_back();
    REQUIRE(epochs.size() >= 2);
    std::size_t next = 0;
    for (Turn t = 1; t <= horizon && next < epochs.size(); ++t) {
      p.step(seq->action(t));
      if (t == epochs[next].end()) {
        const Coord r = epochs[next].radius;
        CAPTURE(g);
        CAPTURE(t);
        for (Coord y = -r; y <= r; ++y) {
          for (Coord x = -r; x <= r; ++x) REQUIRE(p.burned().contains({x, y}));
        }
        ++next;
      }
    }
    CHECK(next == epochs.size());
  }
}

TEST_CASE("full-burn activations are in the box") {
  const auto f = GrowthFunction::power_ceil(Rational(1), Rational(5, 4));
  const auto seq = compile(full_burn_strategy(), f, 20000);
  for (Turn t = 1; t <= 20000; ++t) {
    const Action a = seq->action(t);
    if (!a.is_pass()) REQUIRE(Box{f(t)}.contains(*a.burn));
  }
}

TEST_CASE("full-burn epoch length grows like f^(2/3)") {
  const auto f = GrowthFunction::power_ceil(Rational(1), Rational(5, 4));
  double lo = 1e9;
  double hi = 0.0;
  int epochs = 0;
  for (FullBurnEpoch e = full_burn_epoch(f, 1); e.start <= 2'000'000; e = full_burn_epoch(f, e.end())) {
    if (e.radius >= 20) {
      const double ratio = static_cast<double>(e.tau) / std::pow(static_cast<double>(e.radius), 2.0 / 3.0);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      ++epochs;
    }
  }
  CHECK(epochs > 20);
  CHECK(lo >= 1.5);
  CHECK(hi <= 3.5);
}

TEST_CASE("phase layout") {
  const PhaseLayout p = phase_layout(Rational(1), 2);
  CHECK(p.first == 81);
  CHECK(p.last == 255);
  CHECK(p.budget == 8);
  const Coord near = power_ceil_eval(Rational(1), Rational(3, 2), 16);
  const Coord far = power_ceil_eval(Rational(1), Rational(3, 2), 80);
  CHECK(near == 64);
  CHECK(far == 716);
  CHECK(p.w == 128);
  CHECK(p.l == 652);
  REQUIRE(p.rectangles.size() == 4);
  CHECK(p.rectangles[0].name == 'U');
  CHECK(p.rectangles[0].origin == LatticePoint{-64, 65});
  CHECK(p.rectangles[1].name == 'L');
  CHECK(p.rectangles[1].origin == LatticePoint{-716, -64});
  CHECK(p.rectangles[2].origin == LatticePoint{65, -64});
  CHECK(p.rectangles[3].origin == LatticePoint{-64, -716});
  CHECK(phase_boundary(3) == 81);
  CHECK(phase_layout(Rational(1), 0).rectangles.empty());
}

TEST_CASE("phase strategy budget and box containment") {
  for (const Rational c : {Rational(1), Rational(1, 2), Rational(3)}) {
    const auto f = GrowthFunction::power_ceil(c, Rational(3, 2));
    const auto seq = compile(phase_strategy(c), f, phase_boundary(7));
    for (Count i = 0; i <= 5; ++i) {
      const PhaseLayout layout = phase_layout(c, i);
      Count burns = 0;
      for (Turn t = layout.first; t <= layout.last; ++t) {
        const Action a = seq->action(t);
        if (a.is_pass()) continue;
        ++burns;
        REQUIRE(Box{f(t)}.contains(*a.burn));
      }
      CAPTURE(i);
      CHECK(burns == 4 * i * i * i);
      CHECK(burns <= layout.last - layout.first + 1);
    }
    const auto ends = seq->phase_ends(300);
    CHECK(ends == std::vector<Turn>{15, 80, 255});
  }
}

TEST_CASE("delay and trim") {
  const auto f = identity();
  const auto d = compile(delay(constant_origin(), 3), f, 10);
  CHECK(actions_of(*d, 5) ==
        std::vector<Action>{Action::pass(), Action::pass(), Action::pass(), Action::at({0, 0}), Action::at({0, 0})});
  const auto base = compile(full_burn_strategy(), f, 60);
  const auto d0 = compile(delay(full_burn_strategy(), 0), f, 60);
  CHECK(actions_of(*d0, 60) == actions_of(*base, 60));
  const auto shifted = compile(delay(full_burn_strategy(), 4), f, 60);
  for (Turn t = 5; t <= 60; ++t) CHECK(shifted->action(t) == base->action(t - 4));
  CHECK(shifted->phase_ends(60).front() == base->phase_ends(60).front() + 4);

  const auto tr = compile(trim(constant_origin(), 5), f, 10);
  CHECK(first_burn(*tr, 10) == std::optional<Turn>(6));
  const auto t0 = compile(trim(full_burn_strategy(), 0), f, 60);
  CHECK(actions_of(*t0, 60) == actions_of(*base, 60));

  std::vector<std::string> warnings;
  compile(trim(scripted({LatticePoint{0, 0}}), 3), f, 10, &warnings);
  CHECK(warnings.size() == 2);
  warnings.clear();
  compile(trim(constant_origin(), 3), f, 10, &warnings);
  CHECK(warnings.empty());
  CHECK_THROWS_AS(compile(delay(constant_origin(), -1), f, 10), std::invalid_argument);
}

TEST_CASE("trimmed burned set stays inside the original") {
  const auto f = GrowthFunction::power_ceil(Rational(3, 2), Rational(1));
  const auto base = compile(full_burn_strategy(), f, 50);
  const auto trimmed = compile(trim(full_burn_strategy(), 7), f, 50);
  OracleProcess o(f, f(50));
  OracleProcess t(f, f(50));
  for (Turn n = 1; n <= 50; ++n) {
    o.step(base->action(n));
    t.step(trimmed->action(n));
    for (const LatticePoint p : t.burned().points()) REQUIRE(o.burned().contains(p));
  }
}

TEST_CASE("perturb") {
  const auto f = identity();
  const auto zero = compile(perturb(full_burn_strategy(), 2, {}), f, 60);
  CHECK(actions_of(*zero, 60) == actions_of(*compile(full_burn_strategy(), f, 60), 60));
  const auto moved = compile(perturb(constant_origin(), 1, {}, {1, 0}), f, 10);
  for (Turn t = 1; t <= 10; ++t) CHECK(moved->action(t) == Action::at({1, 0}));
  const auto clamped = compile(perturb(scripted({LatticePoint{1, 0}}), 1, {{1, {1, 0}}}), f, 10);
  CHECK(clamped->action(1) == Action::at({1, 0}));
  CHECK_THROWS_AS(compile(perturb(constant_origin(), 1, {{3, {1, 1}}}), f, 10), std::invalid_argument);
  CHECK_THROWS_AS(compile(perturb(constant_origin(), 1, {}, {0, 2}), f, 10), std::invalid_argument);
}

TEST_CASE("perturbed counts differ by at most the boundary layers") {
  const auto f = GrowthFunction::power_ceil(Rational(3, 2), Rational(1));
  const Coord d = 2;
  const auto base_spec = scripted({LatticePoint{0, 0}, std::nullopt, LatticePoint{2, -1}, LatticePoint{-3, 3},
                                   std::nullopt, LatticePoint{5, 0}, LatticePoint{-1, -6}});
  const auto base = compile(base_spec, f, 40);
  const auto moved = compile(perturb(base_spec, d, {{3, {-2, 0}}, {6, {1, 1}}}, {0, 2}), f, 40);
  const auto a = run(f, *base, 40, all_turns(40), Backend::Oracle);
  const auto b = run(f, *moved, 40, all_turns(40), Backend::Oracle);
  for (std::size_t k = 0; k < a.entries.size(); ++k) {
    const Turn t = a.entries[k].t;
    Count layer = 0;
    for (Turn i = 1; i <= std::min<Turn>(t, 7); ++i) {
      if (base->action(i).is_pass()) continue;
      layer += diamond_card(t - i + d) - (t - i >= d ? diamond_card(t - i - d) : 0);
    }
    CHECK(std::llabs(a.entries[k].burned - b.entries[k].burned) <= layer);
  }
}

TEST_CASE("reuse on a dominating grid") {
  const auto g = identity();
  const auto f = GrowthFunction::power_ceil(Rational(2), Rational(1));
  const auto seq = compile(reuse_scaled(full_burn_strategy(), "ceil(1*n)"), f, 80);
  const auto on_g = compile(full_burn_strategy(), g, 80);
  CHECK(actions_of(*seq, 80) == actions_of(*on_g, 80));
  const auto a = run(g, *on_g, 80, all_turns(80), Backend::Geometric);
  const auto b = run(f, *seq, 80, all_turns(80), Backend::Geometric);
  for (std::size_t k = 0; k < a.entries.size(); ++k) {
    CHECK(a.entries[k].burned == b.entries[k].burned);
    const double scale = static_cast<double>(a.entries[k].total) / static_cast<double>(b.entries[k].total);
    CHECK(b.entries[k].density == doctest::Approx(a.entries[k].density * scale));
  }
  const auto same = compile(reuse_scaled(full_burn_strategy(), "ceil(1*n)"), g, 80);
  CHECK(actions_of(*same, 80) == actions_of(*on_g, 80));
  CHECK_THROWS_AS(compile(reuse_scaled(constant_origin(), "ceil(2*n)"), g, 80), std::invalid_argument);
  CHECK_THROWS_AS(compile(reuse_scaled(constant_origin(), "pathological"), g, 80), std::invalid_argument);
}

TEST_CASE("wait adaptation holds a burn until its point is in the box") {
  const auto f = identity();
  const auto seq = compile(wait_adapt(scripted({LatticePoint{5, 0}, LatticePoint{1, 1}, std::nullopt})), f, 20);
  CHECK(seq->action(1) == Action::at({0, 0}));
  for (Turn t = 2; t <= 4; ++t) CHECK(seq->action(t).is_pass());
  CHECK(seq->action(5) == Action::at({5, 0}));
  CHECK(seq->action(6) == Action::at({1, 1}));
  CHECK(seq->action(7).is_pass());
  // Out-of-order queries see the same sequence.
  const auto again = compile(wait_adapt(scripted({LatticePoint{5, 0}, LatticePoint{1, 1}})), f, 20);
  CHECK(again->action(6) == Action::at({1, 1}));
  CHECK(again->action(1) == Action::at({0, 0}));
  // Strict runs pass once adapted.
  const auto phase = compile(wait_adapt(phase_strategy(Rational(1))), f, 300);
  CHECK_NOTHROW(run(f, *phase, 300, std::vector<Turn>{300}, Backend::Geometric));
}

TEST_CASE("phase strategy for a target density") {
  const Rational c(1);
  const StrategySpec s = phase_for_density(0.05, c);
  const auto j = strategy_to_json(s);
  CHECK(j["kind"] == "reuse_scaled");
  CHECK(j["base"]["kind"] == "phase");
  const Rational cb = Rational::parse(j["base"]["c"].get<std::string>());
  const double expected = std::sqrt(0.05) / (1.0 - std::sqrt(6.0) * std::sqrt(0.05));
  CHECK(cb.to_double() == doctest::Approx(expected).epsilon(1e-5));
  CHECK(cb <= c);
  CHECK(j["base_growth"] == "repaired(ceil(" + cb.str() + "*n^3/2))");
  const auto f = GrowthFunction::power_ceil(c, Rational(3, 2));
  CHECK_NOTHROW(compile(s, f, 2000));
  const double top = 1.0 / ((1.0 + std::sqrt(6.0)) * (1.0 + std::sqrt(6.0)));
  const auto at_top = strategy_to_json(phase_for_density(top, c));
  CHECK(Rational::parse(at_top["base"]["c"].get<std::string>()) == c);
  CHECK_THROWS_AS(phase_for_density(0.2, c), std::invalid_argument);
  CHECK_THROWS_AS(phase_for_density(0.0, c), std::invalid_argument);
}

TEST_CASE("strategy JSON round trip") {
  const std::vector<StrategySpec> specs{
      constant_origin(),
      scripted({LatticePoint{1, 2}, std::nullopt}),
      full_burn_strategy(),
      full_burn_strategy("ceil(1*n^5/4)"),
      rectangle_tiling_strategy(10, 12, 5, {-3, 4}),
      phase_strategy(Rational(3, 7)),
      delay(phase_strategy(Rational(1)), 4),
      trim(constant_origin(), 2),
      perturb(full_burn_strategy(), 3, {{2, {1, -2}}, {9, {0, 3}}}, {-1, 0}),
      reuse_scaled(phase_strategy(Rational(1, 2)), "ceil(1/2*n^3/2)"),
      wait_adapt(delay(constant_origin(), 1)),
  };
  for (const auto& s : specs) {
    const auto j = strategy_to_json(s);
    CAPTURE(j.dump());
    CHECK(strategy_from_json(j) == s);
    CHECK(strategy_from_json(nlohmann::json::parse(j.dump())) == s);
  }
  CHECK(strategy_from_json(nlohmann::json{{"kind", "phase"}, {"c", 1.5}}) == phase_strategy(Rational(3, 2)));
  CHECK(strategy_from_json(nlohmann::json{{"kind", "phase"}, {"c", 2}}) == phase_strategy(Rational(2)));
}

TEST_CASE("strategy JSON errors name the field") {
  const auto message = [](const nlohmann::json& j) -> std::string {
    try {
      strategy_from_json(j);
    } catch (const std::invalid_argument& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message(nlohmann::json::array()).find("(root)") != std::string::npos);
  CHECK(message({{"kind", "nope"}}).find("unknown strategy kind") != std::string::npos);
  CHECK(message({{"kind", "delay"}, {"k", 1}}).find("'base'") != std::string::npos);
  CHECK(message({{"kind", "delay"}, {"k", "x"}, {"base", {{"kind", "constant_origin"}}}}).find("'k'") !=
        std::string::npos);
  CHECK(message({{"kind", "trim"}, {"k", 1}, {"base", {{"kind", "phase"}, {"c", "0"}}}}).find("'base.c'") !=
        std::string::npos);
  CHECK(message({{"kind", "rectangle_tiling"}, {"w", 0}, {"l", 1}, {"budget", 1}}).find("'w'") != std::string::npos);
  CHECK(message({{"kind", "scripted"}, {"actions", {{1}}}}).find("'actions[0]'") != std::string::npos);
  CHECK(message({{"kind", "perturb"}, {"d", 1}, {"offsets", {{{"t", 1}}}}, {"base", {{"kind", "constant_origin"}}}})
            .find("'offsets[0].offset'") != std::string::npos);
}

TEST_CASE("strategy arguments") {
  CHECK(parse_strategy_arg("constant-origin") == constant_origin());
  CHECK(parse_strategy_arg("full-burn") == full_burn_strategy());
  CHECK(parse_strategy_arg("phase") == phase_strategy(Rational(1)));
  CHECK(parse_strategy_arg("phase:1/2") == phase_strategy(Rational(1, 2)));
  CHECK(parse_strategy_arg(R"({"kind":"delay","k":2,"base":{"kind":"constant_origin"}})") ==
        delay(constant_origin(), 2));
  const auto path = std::filesystem::temp_directory_path() / "burngrid_strategy_arg.json";
  std::ofstream(path) << R"({"kind":"trim","k":1,"base":{"kind":"full_burn"}})";
  CHECK(parse_strategy_arg(path.string()) == trim(full_burn_strategy(), 1));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(parse_strategy_arg("spiral"), std::invalid_argument);
  CHECK_THROWS_AS(parse_strategy_arg("{not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_strategy_arg(""), std::invalid_argument);
}

TEST_CASE("rectangle tiling strategy") {
  const auto f = GrowthFunction::power_ceil(Rational(4), Rational(1));
  const auto seq = compile(rectangle_tiling_strategy(4, 4, 4, {-2, -2}), f, 10);
  CHECK(seq->action(1) == Action::at({-1, -2}));
  CHECK(seq->action(4) == Action::at({-1, 0}));
  CHECK(seq->action(5).is_pass());
  CHECK(seq->phase_ends(10) == std::vector<Turn>{4});
}

TEST_CASE("empty strategies warn") {
  std::vector<std::string> warnings;
  compile(scripted({}), identity(), 10, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("no Burn") != std::string::npos);
  CHECK_FALSE(first_burn(*compile(scripted({}), identity(), 10), 10).has_value());
}
