#include "burngrid/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "CLI11.hpp"

#include "burngrid/analysis.hpp"
#include "burngrid/plot.hpp"

namespace burngrid {

namespace {

using nlohmann::json;

// Configuration problems map to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument("field '" + field + "': " + what) {}
};

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

Turn parse_turn(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected an integer, got '" + text + "'");
  }
}

BackendChoice parse_backend(const std::string& text) {
  if (text == "oracle") return BackendChoice::Oracle;
  if (text == "geometric") return BackendChoice::Geometric;
  if (text == "both") return BackendChoice::Both;
  throw ConfigError("backend", "expected oracle, geometric or both, got '" + text + "'");
}

BoxPolicy parse_policy(const std::string& text) {
  if (text == "strict") return BoxPolicy::Strict;
  if (text == "lenient") return BoxPolicy::Lenient;
  throw ConfigError("policy", "expected strict or lenient, got '" + text + "'");
}

StrategySpec strategy_from_config(const json& v) {
  try {
    if (v.is_string()) return parse_strategy_arg(v.get<std::string>());
    return strategy_from_json(v);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("strategy", e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<EndpointTable> endpoints_for(const GrowthFunction& f) {
  if (const auto p = f.power_params()) return theoretical_endpoints(p->c, p->alpha);
  return std::nullopt;
}

std::vector<std::pair<std::string, double>> reference_lines(const GrowthFunction& f) {
  std::vector<std::pair<std::string, double>> lines;
  if (const auto e = endpoints_for(f)) {
    lines.emplace_back("lower endpoint " + fmt(e->lo), e->lo);
    if (!e->singleton()) lines.emplace_back("upper endpoint " + fmt(e->hi), e->hi);
  }
  return lines;
}

std::string clamp_summary(const std::vector<ClampEvent>& clamps) {
  Coord worst = 0;
  for (const ClampEvent& c : clamps) worst = std::max(worst, c.linf_distance);
  return std::to_string(clamps.size()) + " activation(s) clamped into the box, largest L-infinity distance " +
         std::to_string(worst);
}

std::string trace_csv(const DensityTrace& trace) {
  std::ostringstream out;
  write_trace_csv(trace, out);
  return out.str();
}

int cmd_simulate(RunConfig cfg, std::ostream& out, std::ostream& err) {
  if (cfg.growth.empty()) throw ConfigError("growth", "required");
  if (cfg.horizon < 1) throw ConfigError("horizon", "must be at least 1");
  if (const auto* s = std::get_if<SampledCount>(&cfg.count_mode); s && s->rows < 1) {
    throw ConfigError("rows", "sampled counting needs rows >= 1");
  }
  GrowthFunction f = [&] {
    try {
      return GrowthFunction::parse(cfg.growth);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("growth", e.what());
    }
  }();
  if (cfg.backend != BackendChoice::Oracle && !f.strictly_increasing()) {
    throw ConfigError("backend", "the geometric backend needs a strictly increasing growth function; " +
                                     f.describe() + " is not (use --backend oracle or repaired(...))");
  }
  if (cfg.backend == BackendChoice::Both && std::holds_alternative<SampledCount>(cfg.count_mode)) {
    throw ConfigError("count", "--backend both compares exact counts; sampled counting is not allowed");
  }

  std::vector<std::string> warnings;
  std::shared_ptr<const ActivatorSequence> seq;
  try {
    seq = compile(cfg.strategy, f, cfg.horizon, &warnings);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("strategy", e.what());
  }
  for (const std::string& w : warnings) err << "warning: " << w << '\n';

  std::vector<Turn> checkpoints;
  try {
    checkpoints = resolve_checkpoints(cfg.checkpoints, *seq, cfg.horizon);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("checkpoints", e.what());
  }

  const RunOptions options{cfg.policy, cfg.cell_budget};
  const auto run_with = [&](Backend b) { return run(f, *seq, cfg.horizon, checkpoints, b, cfg.count_mode, options); };

  DensityTrace trace;
  std::optional<bool> agree;
  try {
    if (cfg.backend == BackendChoice::Both) {
      DensityTrace oracle;
      if (default_worker_threads() > 1) {
        auto pending = std::async(std::launch::async, run_with, Backend::Oracle);
        trace = run_with(Backend::Geometric);
        oracle = pending.get();
      } else {
        oracle = run_with(Backend::Oracle);
        trace = run_with(Backend::Geometric);
      }
      agree = true;
      for (std::size_t i = 0; i < trace.entries.size(); ++i) {
        if (trace.entries[i].burned != oracle.entries[i].burned) {
          err << "backends disagree at t=" << trace.entries[i].t << ": oracle " << oracle.entries[i].burned
              << ", geometric " << trace.entries[i].burned << '\n';
          agree = false;
          break;
        }
      }
      trace.meta.backend = "both";
    } else {
      trace = run_with(cfg.backend == BackendChoice::Oracle ? Backend::Oracle : Backend::Geometric);
    }
  } catch (const OutOfBoxActivation& e) {
    err << "error: " << e.what() << " (strict box policy; pass --policy lenient to clamp)\n";
    return 2;
  }
  if (!trace.clamps.empty()) err << "note: " << clamp_summary(trace.clamps) << '\n';

  const std::string csv = trace_csv(trace);
  if (cfg.csv) {
    write_file_atomic(*cfg.csv, csv);
  } else {
    out << csv;
  }

  if (cfg.report) {
    json report{{"growth", f.describe()},
                {"strategy", strategy_to_json(cfg.strategy)},
                {"horizon", cfg.horizon},
                {"backend", trace.meta.backend},
                {"checkpoints", trace.entries.size()},
                {"warnings", warnings}};
    if (const auto e = endpoints_for(f)) report["endpoints"] = endpoints_to_json(*e);
    if (!trace.entries.empty()) {
      report["tail"] = verdict_to_json(tail_density(trace));
      const bool exact = std::none_of(trace.entries.begin(), trace.entries.end(),
                                      [](const TraceEntry& e) { return e.sampled; });
      if (exact) report["burn_cap"] = verdict_to_json(burn_cap_check(trace));
    }
    Coord worst = 0;
    for (const ClampEvent& c : trace.clamps) worst = std::max(worst, c.linf_distance);
    report["clamps"] = {{"count", trace.clamps.size()}, {"max_linf_distance", worst}};
    if (agree) report["backends_agree"] = *agree;
    write_file_atomic(*cfg.report, report.dump(2) + "\n");
  }
  if (cfg.plot) {
    PlotOptions plot;
    plot.title = f.describe();
    plot.reference_lines = reference_lines(f);
    write_file_atomic(*cfg.plot, density_svg(trace, plot));
  }
  return agree.value_or(true) ? 0 : 1;
}

struct VerifyArgs {
  std::string trace;
  std::vector<std::string> checks;
  std::string c;
  double slack = 1.0;
  std::optional<double> target;
  double tolerance = 0.01;
  std::optional<double> lo;
  std::optional<double> hi;
  std::string window = "1/4";
  std::string report;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  DensityTrace trace;
  {
    std::ifstream in(a.trace);
    if (!in) throw ConfigError("trace", "cannot open '" + a.trace + "'");
    trace = read_trace_csv(in);
  }
  if (trace.entries.empty()) throw ConfigError("trace", "no data rows");
  const Rational window = [&] {
    try {
      return Rational::parse(a.window);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("window", e.what());
    }
  }();
  std::optional<GrowthFunction> growth;
  if (!trace.meta.growth.empty()) {
    try {
      growth = GrowthFunction::parse(trace.meta.growth);
    } catch (const std::exception&) {
      growth.reset();
    }
  }

  std::vector<std::string> checks = a.checks.empty() ? std::vector<std::string>{"burn-cap"} : a.checks;
  json results = json::array();
  bool all = true;
  for (const std::string& name : checks) {
    DensityVerdict v;
    if (name == "burn-cap") {
      v = burn_cap_check(trace);
    } else if (name == "cubic-bound") {
      Rational c;
      if (!a.c.empty()) {
        c = Rational::parse(a.c);
      } else if (growth && growth->power_params() && growth->power_params()->alpha == Rational(3, 2)) {
        c = growth->power_params()->c;
      } else {
        throw ConfigError("c", "cubic-bound needs --c (the trace's growth is not ceil(c*n^3/2))");
      }
      v = cubic_upper_bound_check(trace, c, a.slack);
    } else if (name == "tail-vs-endpoint") {
      double target = 0.0;
      if (a.target) {
        target = *a.target;
      } else if (growth && endpoints_for(*growth)) {
        target = endpoints_for(*growth)->lo;
      } else {
        throw ConfigError("target", "tail-vs-endpoint needs --target");
      }
      v = tail_vs_endpoint(trace, target, a.tolerance, window);
    } else if (name == "tail-band") {
      if (!a.lo || !a.hi) throw ConfigError("lo", "tail-band needs --lo and --hi");
      v = tail_band_check(trace, *a.lo, *a.hi, window);
    } else {
      throw ConfigError("check", "unknown check '" + name + "' (burn-cap, cubic-bound, tail-vs-endpoint, tail-band)");
    }
    out << v.check << ": " << (v.pass ? "PASS" : "FAIL") << " (" << v.detail << ")\n";
    all = all && v.pass;
    results.push_back(verdict_to_json(v));
  }
  if (!a.report.empty()) {
    const json report{{"trace", a.trace}, {"growth", trace.meta.growth}, {"pass", all}, {"verdicts", results}};
    write_file_atomic(a.report, report.dump(2) + "\n");
  }
  return all ? 0 : 1;
}

int cmd_probe(const std::string& growth, Turn horizon, const std::string& beta, const std::string& c, double ratio,
              const std::string& report_path, std::ostream& out) {
  const GrowthFunction f = [&] {
    try {
      return GrowthFunction::parse(growth);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("growth", e.what());
    }
  }();
  ProbeConfig config;
  config.checkpoint_ratio = ratio;
  GrowthProbeReport r;
  try {
    r = probe_controlled_growth(f, horizon, Rational::parse(beta), Rational::parse(c), config);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("probe", e.what());
  }
  out << GrowthProbeReport::kBanner << '\n';
  out << "growth " << f.describe() << ", horizon " << horizon << ", epsilon(n) = ceil(n^" << beta << "), c = " << c
      << '\n';
  out << "n,increasing,sublinear_ratio,linear_ratio\n";
  for (const ProbeRow& row : r.rows) {
    out << row.n << ',' << (row.increasing ? "yes" : "no") << ',' << fmt(row.sublinear_ratio) << ','
        << fmt(row.linear_ratio) << '\n';
  }
  out << "tail from n=" << r.rows[r.tail_begin].n << ": max sublinear ratio " << fmt(r.tail_max_sublinear)
      << ", min linear ratio " << fmt(r.tail_min_linear) << '\n';
  out << "condition (i) eventual strict increase: " << (r.flag_increasing ? "FLAGGED" : "ok") << '\n';
  out << "condition (ii) sublinear-shift stability: " << (r.flag_sublinear ? "FLAGGED" : "ok") << '\n';
  out << "condition (iii) linear-shift expansion: " << (r.flag_linear ? "FLAGGED" : "ok") << '\n';
  if (!report_path.empty()) {
    json rows = json::array();
    for (const ProbeRow& row : r.rows) {
      rows.push_back({{"n", row.n},
                      {"increasing", row.increasing},
                      {"sublinear_ratio", row.sublinear_ratio},
                      {"linear_ratio", row.linear_ratio}});
    }
    const json report{{"banner", GrowthProbeReport::kBanner},
                      {"growth", f.describe()},
                      {"horizon", horizon},
                      {"rows", rows},
                      {"flags",
                       {{"increasing", r.flag_increasing}, {"sublinear", r.flag_sublinear}, {"linear", r.flag_linear}}}};
    write_file_atomic(report_path, report.dump(2) + "\n");
  }
  return 0;
}

int cmd_endpoints(const std::string& growth, const std::string& c, const std::string& alpha, bool as_json,
                  std::ostream& out) {
  EndpointTable e;
  if (!growth.empty()) {
    const GrowthFunction f = GrowthFunction::parse(growth);
    const auto p = f.power_params();
    if (!p) throw ConfigError("growth", "endpoints are tabulated for ceil(c*n^alpha) only");
    e = theoretical_endpoints(p->c, p->alpha);
  } else {
    if (c.empty() || alpha.empty()) throw ConfigError("alpha", "give --growth, or both --c and --alpha");
    e = theoretical_endpoints(Rational::parse(c), Rational::parse(alpha));
  }
  if (as_json) {
    out << endpoints_to_json(e).dump(2) << '\n';
  } else {
    out << "c=" << e.c.str() << " alpha=" << e.alpha.str() << " case=" << to_string(e.kind) << " P=" << e.str() << '\n';
  }
  return 0;
}

int cmd_selftest(Turn horizon, std::ostream& out) {
  bool all = true;
  for (const BatteryCase& bc : equivalence_battery()) {
    const GrowthFunction f = GrowthFunction::parse(bc.growth);
    const auto seq = compile(bc.strategy, f, horizon);
    const BackendComparison cmp = compare_backends(f, *seq, horizon, {BoxPolicy::Lenient});
    out << (cmp.agree ? "ok   " : "FAIL ") << bc.growth << " x " << bc.strategy_name;
    if (cmp.agree) {
      out << " (" << cmp.turns_checked << " turns, |B|=" << cmp.oracle_count << ")\n";
    } else {
      out << " (t=" << *cmp.first_mismatch << ": oracle " << cmp.oracle_count << ", geometric "
          << cmp.geometric_count << ")\n";
    }
    all = all && cmp.agree;
  }
  out << (all ? "selftest passed" : "selftest FAILED") << '\n';
  return all ? 0 : 1;
}

}  // namespace

std::vector<Turn> geometric_checkpoints(Turn horizon, double ratio, Turn start) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (!(ratio > 1.0)) throw std::invalid_argument("checkpoint ratio must exceed 1");
  if (start < 1) throw std::invalid_argument("first checkpoint must be at least 1");
  std::vector<Turn> out;
  for (Turn t = start; t <= horizon;) {
    out.push_back(t);
    t = std::max(t + 1, static_cast<Turn>(std::ceil(static_cast<double>(t) * ratio)));
  }
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

CheckpointPlan parse_checkpoints(const std::string& text) {
  CheckpointPlan plan;
  if (text == "phase-ends") {
    plan.kind = CheckpointPlan::Kind::PhaseEnds;
    return plan;
  }
  if (text.rfind("geometric", 0) == 0) {
    plan.kind = CheckpointPlan::Kind::Geometric;
    std::string rest = text.substr(9);
    if (rest.empty()) return plan;
    if (rest.front() != ':') throw ConfigError("checkpoints", "expected geometric[:ratio[:start]]");
    rest.erase(0, 1);
    const auto colon = rest.find(':');
    try {
      plan.ratio = std::stod(rest.substr(0, colon));
    } catch (const std::exception&) {
      throw ConfigError("checkpoints", "bad ratio in '" + text + "'");
    }
    if (colon != std::string::npos) plan.start = parse_turn(rest.substr(colon + 1), "checkpoints");
    if (!(plan.ratio > 1.0)) throw ConfigError("checkpoints", "ratio must exceed 1");
    return plan;
  }
  plan.kind = CheckpointPlan::Kind::Explicit;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) plan.turns.push_back(parse_turn(item, "checkpoints"));
  }
  if (plan.turns.empty()) throw ConfigError("checkpoints", "empty turn list");
  return plan;
}

std::vector<Turn> resolve_checkpoints(const CheckpointPlan& plan, const ActivatorSequence& strategy, Turn horizon) {
  switch (plan.kind) {
    case CheckpointPlan::Kind::Geometric:
      return geometric_checkpoints(horizon, plan.ratio, plan.start);
    case CheckpointPlan::Kind::PhaseEnds: {
      std::vector<Turn> ends = strategy.phase_ends(horizon);
      if (ends.empty()) {
        throw std::invalid_argument("strategy has no phase or epoch ends at or before turn " + std::to_string(horizon));
      }
      return ends;
    }
    case CheckpointPlan::Kind::Explicit: {
      std::vector<Turn> turns = plan.turns;
      std::sort(turns.begin(), turns.end());
      turns.erase(std::unique(turns.begin(), turns.end()), turns.end());
      if (turns.front() < 1 || turns.back() > horizon) {
        throw std::invalid_argument("explicit checkpoints must lie in [1, " + std::to_string(horizon) + "]");
      }
      return turns;
    }
  }
  return {};
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("(root)", "expected a JSON object");
  static const std::vector<std::string> known{"growth", "strategy",    "horizon", "checkpoints", "backend",
                                              "count",  "rows",        "seed",    "policy",      "cell_budget",
                                              "outputs"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown field");
  }
  RunConfig cfg;
  const auto str = [&](const char* key) -> std::string {
    if (!j[key].is_string()) throw ConfigError(key, "expected a string");
    return j[key].get<std::string>();
  };
  const auto integer = [&](const json& v, const std::string& key) -> std::int64_t {
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    return v.get<std::int64_t>();
  };
  if (j.contains("growth")) cfg.growth = str("growth");
  if (j.contains("strategy")) cfg.strategy = strategy_from_config(j["strategy"]);
  if (j.contains("horizon")) cfg.horizon = integer(j["horizon"], "horizon");
  if (j.contains("checkpoints")) {
    const json& c = j["checkpoints"];
    if (c.is_string()) {
      cfg.checkpoints = parse_checkpoints(c.get<std::string>());
    } else if (c.is_array()) {
      cfg.checkpoints.kind = CheckpointPlan::Kind::Explicit;
      for (const json& t : c) cfg.checkpoints.turns.push_back(integer(t, "checkpoints"));
      if (cfg.checkpoints.turns.empty()) throw ConfigError("checkpoints", "empty turn list");
    } else if (c.is_object()) {
      cfg.checkpoints.kind = CheckpointPlan::Kind::Geometric;
      if (c.contains("ratio")) {
        if (!c["ratio"].is_number()) throw ConfigError("checkpoints.ratio", "expected a number");
        cfg.checkpoints.ratio = c["ratio"].get<double>();
      }
      if (c.contains("start")) cfg.checkpoints.start = integer(c["start"], "checkpoints.start");
      if (!(cfg.checkpoints.ratio > 1.0)) throw ConfigError("checkpoints.ratio", "must exceed 1");
    } else {
      throw ConfigError("checkpoints", "expected a string, a turn list or {ratio, start}");
    }
  }
  if (j.contains("backend")) cfg.backend = parse_backend(str("backend"));
  if (j.contains("count")) {
    const std::string mode = str("count");
    if (mode == "sampled") {
      SampledCount s{1000, 0};
      if (j.contains("rows")) s.rows = integer(j["rows"], "rows");
      if (j.contains("seed")) s.seed = static_cast<std::uint64_t>(integer(j["seed"], "seed"));
      cfg.count_mode = s;
    } else if (mode != "exact") {
      throw ConfigError("count", "expected exact or sampled");
    }
  }
  if (j.contains("policy")) cfg.policy = parse_policy(str("policy"));
  if (j.contains("cell_budget")) cfg.cell_budget = integer(j["cell_budget"], "cell_budget");
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_object()) throw ConfigError("outputs", "expected an object");
    for (const auto& [key, value] : o.items()) {
      if (!value.is_string()) throw ConfigError("outputs." + key, "expected a path string");
      if (key == "csv") {
        cfg.csv = value.get<std::string>();
      } else if (key == "report") {
        cfg.report = value.get<std::string>();
      } else if (key == "plot") {
        cfg.plot = value.get<std::string>();
      } else {
        throw ConfigError("outputs." + key, "unknown output (csv, report, plot)");
      }
    }
  }
  return cfg;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

std::vector<BatteryCase> equivalence_battery() {
  const std::vector<std::string> growths{"ceil(1*n)", "ceil(3/2*n)", "repaired(ceil(1*n^4/3))"};
  const std::vector<std::pair<std::string, StrategySpec>> strategies{
      {"constant_origin", constant_origin()},
      {"full_burn", full_burn_strategy()},
      {"phase(1)", phase_strategy(Rational(1))},
      {"delay(constant_origin,3)", delay(constant_origin(), 3)},
      {"delay(full_burn,2)", delay(full_burn_strategy(), 2)},
      {"delay(phase(1),5)", delay(phase_strategy(Rational(1)), 5)},
      {"trim(constant_origin,4)", trim(constant_origin(), 4)},
      {"trim(full_burn,3)", trim(full_burn_strategy(), 3)},
      {"trim(phase(1),20)", trim(phase_strategy(Rational(1)), 20)},
      {"perturb(constant_origin,d=2)",
       perturb(constant_origin(), 2, {{2, {0, 2}}, {5, {-1, -1}}, {9, {2, 0}}}, {1, -1})},
      {"perturb(full_burn,d=1)", perturb(full_burn_strategy(), 1, {{4, {0, -1}}}, {1, 0})},
      {"perturb(phase(1),d=3)", perturb(phase_strategy(Rational(1)), 3, {{17, {-2, 1}}}, {1, 2})},
  };
  std::vector<BatteryCase> cases;
  for (const std::string& g : growths) {
    for (const auto& [name, s] : strategies) cases.push_back({g, name, s});
  }
  return cases;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Burning processes on growing square grids"};
  app.name("burngrid");
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run a strategy on a growing grid and write a density trace");
  std::string config_path, growth, strategy, checkpoints, backend, count, policy, csv, report, plot;
  Turn horizon = 0;
  std::int64_t rows = 1000;
  std::uint64_t seed = 0;
  Count cell_budget = 400'000'000;
  sim->add_option("--config", config_path, "JSON run configuration; flags override its fields");
  auto* o_growth = sim->add_option("--growth", growth, "ceil(C*n^A) | pathological | tabulated:<path> | repaired(...)");
  auto* o_strategy = sim->add_option("--strategy", strategy, "constant-origin | full-burn | phase[:c] | JSON | file");
  auto* o_horizon = sim->add_option("--horizon", horizon, "Last turn");
  auto* o_checkpoints =
      sim->add_option("--checkpoints", checkpoints, "geometric[:ratio[:start]] | phase-ends | t1,t2,...");
  auto* o_backend = sim->add_option("--backend", backend, "oracle | geometric | both");
  auto* o_count = sim->add_option("--count", count, "exact | sampled");
  auto* o_rows = sim->add_option("--rows", rows, "Sampled rows");
  auto* o_seed = sim->add_option("--seed", seed, "Sampling seed");
  auto* o_policy = sim->add_option("--policy", policy, "strict | lenient handling of out-of-box activations");
  auto* o_budget = sim->add_option("--cell-budget", cell_budget, "Largest oracle window in cells");
  auto* o_csv = sim->add_option("--out", csv, "CSV trace path (stdout when absent)");
  auto* o_report = sim->add_option("--report", report, "JSON report path");
  auto* o_plot = sim->add_option("--plot", plot, "SVG plot path");

  auto* ver = app.add_subcommand("verify", "Run analysis checks on a CSV trace");
  VerifyArgs va;
  std::string target_text, lo_text, hi_text;
  ver->add_option("trace", va.trace, "CSV trace")->required();
  ver->add_option("--check", va.checks, "burn-cap | cubic-bound | tail-vs-endpoint | tail-band (repeatable)");
  ver->add_option("--c", va.c, "c for cubic-bound (defaults to the trace's growth)");
  ver->add_option("--slack", va.slack, "slack coefficient for cubic-bound");
  ver->add_option("--target", target_text, "target density for tail-vs-endpoint");
  ver->add_option("--tolerance", va.tolerance, "tolerance for tail-vs-endpoint");
  ver->add_option("--lo", lo_text, "band floor for tail-band");
  ver->add_option("--hi", hi_text, "band ceiling for tail-band");
  ver->add_option("--window", va.window, "tail window fraction, e.g. 1/4");
  ver->add_option("--report", va.report, "JSON verdict report path");

  auto* probe = app.add_subcommand("probe-growth", "Sample the controlled-growth conditions");
  std::string probe_growth, beta = "1/4", probe_c = "1", probe_report;
  Turn probe_horizon = 100000;
  double probe_ratio = 1.3;
  probe->add_option("--growth", probe_growth, "growth spec")->required();
  probe->add_option("--horizon", probe_horizon, "largest n probed");
  probe->add_option("--beta", beta, "epsilon(n) = ceil(n^beta), beta in (0,1)");
  probe->add_option("--c", probe_c, "linear shift constant");
  probe->add_option("--ratio", probe_ratio, "checkpoint ratio");
  probe->add_option("--report", probe_report, "JSON report path");

  auto* ends = app.add_subcommand("endpoints", "Print the predicted set of achievable densities");
  std::string end_growth, end_c, end_alpha;
  bool end_json = false;
  ends->add_option("--growth", end_growth, "ceil(C*n^A)");
  ends->add_option("--c", end_c, "coefficient");
  ends->add_option("--alpha", end_alpha, "exponent");
  ends->add_flag("--json", end_json, "JSON output");

  auto* self = app.add_subcommand("selftest", "Cross-check the oracle and geometric backends on the test battery");
  Turn self_horizon = 60;
  self->add_option("--horizon", self_horizon, "turns per run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      RunConfig cfg;
      if (!config_path.empty()) {
        json j;
        try {
          j = json::parse(read_file(config_path));
        } catch (const json::parse_error& e) {
          throw ConfigError("config", e.what());
        } catch (const std::invalid_argument& e) {
          throw ConfigError("config", e.what());
        }
        cfg = run_config_from_json(j);
      }
      if (o_growth->count()) cfg.growth = growth;
      if (o_strategy->count()) cfg.strategy = strategy_from_config(json(strategy));
      if (o_horizon->count()) cfg.horizon = horizon;
      if (o_checkpoints->count()) cfg.checkpoints = parse_checkpoints(checkpoints);
      if (o_backend->count()) cfg.backend = parse_backend(backend);
      if (o_policy->count()) cfg.policy = parse_policy(policy);
      if (o_budget->count()) cfg.cell_budget = cell_budget;
      if (o_count->count()) {
        if (count == "exact") {
          cfg.count_mode = ExactCount{};
        } else if (count == "sampled") {
          cfg.count_mode = SampledCount{1000, 0};
        } else {
          throw ConfigError("count", "expected exact or sampled, got '" + count + "'");
        }
      }
      if (auto* s = std::get_if<SampledCount>(&cfg.count_mode)) {
        if (o_rows->count()) s->rows = rows;
        if (o_seed->count()) s->seed = seed;
      } else if (o_rows->count() || o_seed->count()) {
        throw ConfigError("rows", "--rows and --seed need --count sampled");
      }
      if (o_csv->count()) cfg.csv = csv;
      if (o_report->count()) cfg.report = report;
      if (o_plot->count()) cfg.plot = plot;
      return cmd_simulate(std::move(cfg), out, err);
    }
    if (ver->parsed()) {
      const auto number = [](const std::string& text, const char* field) -> std::optional<double> {
        if (text.empty()) return std::nullopt;
        try {
          return std::stod(text);
        } catch (const std::exception&) {
          throw ConfigError(field, "expected a number");
        }
      };
      va.target = number(target_text, "target");
      va.lo = number(lo_text, "lo");
      va.hi = number(hi_text, "hi");
      return cmd_verify(va, out);
    }
    if (probe->parsed()) return cmd_probe(probe_growth, probe_horizon, beta, probe_c, probe_ratio, probe_report, out);
    if (ends->parsed()) return cmd_endpoints(end_growth, end_c, end_alpha, end_json, out);
    if (self->parsed()) return cmd_selftest(self_horizon, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace burngrid
