#include "burngrid/growth.hpp"

#include <algorithm>
#include <limits>
#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace burngrid {

namespace {

using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

bool pow_checked(u128 base, std::int64_t exp, u128& out) {
  u128 result = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(result, base, &result)) return false;
  }
  out = result;
  return true;
}

// Exact ceil((p1/q1) * n^(p/q)) as the least m with (m*q1)^q >= p1^q * n^p.
class PowerCeilSolver {
 public:
  PowerCeilSolver(const Rational& c, const Rational& alpha, Turn n)
      : p1_(c.num()), q1_(c.den()), p_(alpha.num()), q_(alpha.den()), n_(n) {
    u128 a = 0;
    u128 b = 0;
    if (pow_checked(static_cast<u128>(p1_), q_, a) && pow_checked(static_cast<u128>(n_), p_, b) &&
        !__builtin_mul_overflow(a, b, &rhs_small_)) {
      small_ = true;
    } else {
      rhs_big_ = boost::multiprecision::pow(BigInt(p1_), static_cast<unsigned>(q_)) *
                 boost::multiprecision::pow(BigInt(n_), static_cast<unsigned>(p_));
    }
  }

  // true when (m*q1)^q >= rhs
  bool reaches(Coord m) const {
    if (small_) {
      u128 lhs = 0;
      u128 base = 0;
      if (__builtin_mul_overflow(static_cast<u128>(m), static_cast<u128>(q1_), &base)) return true;
      if (!pow_checked(base, q_, lhs)) return true;
      return lhs >= rhs_small_;
    }
    const BigInt lhs = boost::multiprecision::pow(BigInt(m) * q1_, static_cast<unsigned>(q_));
    return lhs >= rhs_big_;
  }

  Coord solve() const {
    const long double guess = std::ceil(static_cast<long double>(p1_) / static_cast<long double>(q1_) *
                                        std::pow(static_cast<long double>(n_),
                                                 static_cast<long double>(p_) / static_cast<long double>(q_)));
    Coord m = std::max<Coord>(1, static_cast<Coord>(guess));
    while (m > 1 && reaches(m - 1)) --m;
    while (!reaches(m)) ++m;
    return m;
  }

 private:
  std::int64_t p1_, q1_, p_, q_;
  Turn n_;
  bool small_ = false;
  u128 rhs_small_ = 0;
  BigInt rhs_big_;
};

Turn largest_power_of_two_at_most(Turn n) {
  Turn p = 1;
  while (p <= n / 2) p *= 2;
  return p;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  }
  return out;
}

}  // namespace

Coord power_ceil_eval(const Rational& c, const Rational& alpha, Turn n) {
  if (n < 1) throw std::out_of_range("power growth evaluated at n = " + std::to_string(n) + " < 1");
  return PowerCeilSolver(c, alpha, n).solve();
}

Coord pathological_eval(Turn n) {
  if (n < 1) throw std::out_of_range("pathological growth evaluated at n = " + std::to_string(n) + " < 1");
  return power_ceil_eval(Rational(1), Rational(4, 3), largest_power_of_two_at_most(n));
}

struct PowerImpl {
  Rational c;
  Rational alpha;
};

struct TableImpl {
  std::vector<Coord> values;
  Turn start = 1;
  std::string label;
};

struct PathologicalImpl {};

struct RepairedImpl {
  explicit RepairedImpl(GrowthFunction g) : inner(std::move(g)) {}
  GrowthFunction inner;
  // g+ prefix, extended on demand; guarded so concurrent evaluation is safe.
  mutable std::mutex mutex;
  mutable std::vector<Coord> cache;
};

struct GrowthFunction::Impl {
  std::variant<PowerImpl, TableImpl, PathologicalImpl, std::unique_ptr<RepairedImpl>> body;
  bool strictly_increasing = false;
  Turn start = 1;
};

GrowthFunction GrowthFunction::power_ceil(Rational c, Rational alpha) {
  if (c.num() <= 0) throw std::invalid_argument("growth coefficient c must be positive, got " + c.str());
  if (alpha.num() <= 0) throw std::invalid_argument("growth exponent alpha must be positive, got " + alpha.str());
  auto impl = std::make_shared<Impl>();
  impl->body = PowerImpl{c, alpha};
  // c*((n+1)^a - n^a) >= c*a >= 1 whenever a >= 1, so the ceilings strictly rise.
  impl->strictly_increasing = alpha >= Rational(1) && c * alpha >= Rational(1);
  impl->start = 1;
  return GrowthFunction(std::move(impl));
}

GrowthFunction GrowthFunction::tabulated(std::vector<Coord> values, Turn domain_start, std::string label) {
  if (values.empty()) throw std::invalid_argument("tabulated growth needs at least one value");
  if (domain_start < 1) throw std::invalid_argument("tabulated growth domain must start at n >= 1");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1) {
      throw std::invalid_argument("tabulated growth value f(" + std::to_string(domain_start + static_cast<Turn>(i)) +
                                  ") = " + std::to_string(values[i]) + " is below 1");
    }
  }
  auto impl = std::make_shared<Impl>();
  bool increasing = true;
  for (std::size_t i = 1; i < values.size(); ++i) increasing = increasing && values[i] > values[i - 1];
  impl->strictly_increasing = increasing;
  impl->start = domain_start;
  impl->body = TableImpl{std::move(values), domain_start, std::move(label)};
  return GrowthFunction(std::move(impl));
}

GrowthFunction GrowthFunction::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open growth table '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("growth table '" + path.string() + "' is empty");
  std::vector<Coord> values;
  Turn start = 0;
  Turn expected = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": expected 'n,f(n)'");
    }
    Turn n = 0;
    Coord v = 0;
    try {
      n = std::stoll(trim(line.substr(0, comma)));
      v = std::stoll(trim(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": non-integer entry");
    }
    if (values.empty()) {
      start = n;
    } else if (n != expected) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": expected n = " +
                                  std::to_string(expected));
    }
    expected = n + 1;
    values.push_back(v);
  }
  return tabulated(std::move(values), start, "tabulated:" + path.string());
}

GrowthFunction GrowthFunction::pathological() {
  auto impl = std::make_shared<Impl>();
  impl->body = PathologicalImpl{};
  impl->strictly_increasing = false;
  impl->start = 1;
  return GrowthFunction(std::move(impl));
}

GrowthFunction repair_strictly_increasing(const GrowthFunction& g) {
  auto impl = std::make_shared<GrowthFunction::Impl>();
  auto body = std::make_unique<RepairedImpl>(g);
  impl->body = std::move(body);
  impl->strictly_increasing = true;
  impl->start = g.domain_start();
  return GrowthFunction(std::move(impl));
}

GrowthFunction GrowthFunction::parse(std::string_view spec) {
  const std::string s = strip_spaces(spec);
  if (s == "pathological") return pathological();
  if (s.rfind("tabulated:", 0) == 0) return load_csv(trim(std::string_view(spec).substr(spec.find(':') + 1)));
  if (s.rfind("repaired(", 0) == 0 && s.back() == ')') {
    return repair_strictly_increasing(parse(s.substr(9, s.size() - 10)));
  }
  if (s.rfind("ceil(", 0) == 0 && s.back() == ')') {
    const std::string body = s.substr(5, s.size() - 6);
    const auto star = body.find('*');
    if (star == std::string::npos) throw std::invalid_argument("growth spec '" + std::string(spec) + "': expected C*n^A");
    const std::string coeff = body.substr(0, star);
    const std::string rest = body.substr(star + 1);
    if (rest == "n") return power_ceil(Rational::parse(coeff), Rational(1));
    if (rest.rfind("n^", 0) != 0) {
      throw std::invalid_argument("growth spec '" + std::string(spec) + "': expected C*n^A");
    }
    std::string exponent = rest.substr(2);
    if (exponent.size() >= 2 && exponent.front() == '(' && exponent.back() == ')') {
      exponent = exponent.substr(1, exponent.size() - 2);
    }
    return power_ceil(Rational::parse(coeff), Rational::parse(exponent));
  }
  throw std::invalid_argument("unrecognised growth spec '" + std::string(spec) +
                              "' (expected ceil(C*n^A), pathological, tabulated:<path> or repaired(...))");
}

Coord GrowthFunction::operator()(Turn n) const {
  if (n < impl_->start) {
    throw std::out_of_range("growth function evaluated at n = " + std::to_string(n) + " below its domain start " +
                            std::to_string(impl_->start));
  }
  return std::visit(
      [n](const auto& body) -> Coord {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, PowerImpl>) {
          return power_ceil_eval(body.c, body.alpha, n);
        } else if constexpr (std::is_same_v<T, TableImpl>) {
          const auto index = static_cast<std::size_t>(n - body.start);
          if (index >= body.values.size()) {
            throw std::out_of_range("tabulated growth has no value at n = " + std::to_string(n));
          }
          return body.values[index];
        } else if constexpr (std::is_same_v<T, PathologicalImpl>) {
          return pathological_eval(n);
        } else {
          const RepairedImpl& rep = *body;
          const Turn start = rep.inner.domain_start();
          const auto index = static_cast<std::size_t>(n - start);
          std::lock_guard lock(rep.mutex);
          if (rep.cache.empty()) rep.cache.push_back(rep.inner(start));
          while (rep.cache.size() <= index) {
            const Turn m = start + static_cast<Turn>(rep.cache.size());
            rep.cache.push_back(std::max(rep.inner(m), rep.cache.back() + 1));
          }
          return rep.cache[index];
        }
      },
      impl_->body);
}

GrowthFamily GrowthFunction::family() const {
  switch (impl_->body.index()) {
    case 0:
      return GrowthFamily::PowerCeil;
    case 1:
      return GrowthFamily::Tabulated;
    case 2:
      return GrowthFamily::Pathological;
    default:
      return GrowthFamily::Repaired;
  }
}

bool GrowthFunction::strictly_increasing() const { return impl_->strictly_increasing; }

Turn GrowthFunction::domain_start() const { return impl_->start; }

std::optional<Turn> GrowthFunction::domain_end() const {
  if (const auto* table = std::get_if<TableImpl>(&impl_->body)) {
    return table->start + static_cast<Turn>(table->values.size()) - 1;
  }
  if (const auto* rep = std::get_if<std::unique_ptr<RepairedImpl>>(&impl_->body)) return (*rep)->inner.domain_end();
  return std::nullopt;
}

std::optional<PowerParams> GrowthFunction::power_params() const {
  if (const auto* power = std::get_if<PowerImpl>(&impl_->body)) return PowerParams{power->c, power->alpha};
  return std::nullopt;
}

std::string GrowthFunction::describe() const {
  return std::visit(
      [](const auto& body) -> std::string {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, PowerImpl>) {
          return "ceil(" + body.c.str() + "*n^" + body.alpha.str() + ")";
        } else if constexpr (std::is_same_v<T, TableImpl>) {
          if (!body.label.empty()) return body.label;
          return "tabulated[" + std::to_string(body.start) + ".." +
                 std::to_string(body.start + static_cast<Turn>(body.values.size()) - 1) + "]";
        } else if constexpr (std::is_same_v<T, PathologicalImpl>) {
          return "pathological";
        } else {
          return "repaired(" + body->inner.describe() + ")";
        }
      },
      impl_->body);
}

GrowthProbeReport probe_controlled_growth(const GrowthFunction& f, Turn horizon, Rational epsilon_exponent,
                                          Rational c_probe, const ProbeConfig& config) {
  if (horizon < 16) throw std::invalid_argument("probe horizon must be at least 16, got " + std::to_string(horizon));
  if (epsilon_exponent <= Rational(0) || epsilon_exponent >= Rational(1)) {
    throw std::invalid_argument("epsilon exponent must lie in (0, 1), got " + epsilon_exponent.str());
  }
  if (c_probe <= Rational(0)) throw std::invalid_argument("probe constant must be positive, got " + c_probe.str());

  const double beta = epsilon_exponent.to_double();
  const double cp = c_probe.to_double();
  const auto shift_sub = [beta](Turn m) { return static_cast<Turn>(std::ceil(std::pow(static_cast<double>(m), beta))); };
  const auto shift_lin = [cp](Turn m) { return static_cast<Turn>(std::ceil(cp * static_cast<double>(m))); };

  // Largest m whose probe arguments stay inside the function's domain.
  Turn last = horizon;
  if (const auto end = f.domain_end()) {
    while (last >= config.first_checkpoint && last + std::max(shift_sub(last), shift_lin(last)) > *end) --last;
  }

  std::vector<Turn> checkpoints;
  for (double x = static_cast<double>(std::max(config.first_checkpoint, f.domain_start())); x <= static_cast<double>(last);
       x *= config.checkpoint_ratio) {
    const auto n = static_cast<Turn>(x);
    if (checkpoints.empty() || n > checkpoints.back()) checkpoints.push_back(n);
  }
  if (checkpoints.empty()) throw std::invalid_argument("growth function domain too short for the probe");

  GrowthProbeReport report;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const Turn n = checkpoints[k];
    const Turn window_end = k + 1 < checkpoints.size() ? checkpoints[k + 1] : last + 1;
    ProbeRow row{n, true, 0.0, std::numeric_limits<double>::infinity()};
    for (Turn m = n; m < window_end; ++m) {
      const auto fm = static_cast<double>(f(m));
      row.increasing = row.increasing && f(m + 1) > f(m);
      row.sublinear_ratio = std::max(row.sublinear_ratio, static_cast<double>(f(m + shift_sub(m))) / fm);
      row.linear_ratio = std::min(row.linear_ratio, static_cast<double>(f(m + shift_lin(m))) / fm);
    }
    report.rows.push_back(row);
  }

  report.tail_begin = report.rows.size() / 2;
  report.tail_max_sublinear = 0.0;
  report.tail_min_linear = std::numeric_limits<double>::infinity();
  for (std::size_t k = report.tail_begin; k < report.rows.size(); ++k) {
    const ProbeRow& row = report.rows[k];
    report.flag_increasing = report.flag_increasing || !row.increasing;
    report.tail_max_sublinear = std::max(report.tail_max_sublinear, row.sublinear_ratio);
    report.tail_min_linear = std::min(report.tail_min_linear, row.linear_ratio);
  }
  report.flag_sublinear = report.tail_max_sublinear > 1.0 + config.sublinear_tolerance;
  report.flag_linear = report.tail_min_linear < 1.0 + config.linear_gap;
  return report;
}

}  // namespace burngrid
