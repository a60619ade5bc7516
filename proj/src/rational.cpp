#include "burngrid/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace burngrid {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
  const auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  const std::string_view s = trim(text);
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(trim(s.substr(0, slash)), text), parse_int(trim(s.substr(slash + 1)), text));
  }
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = s.substr(0, dot);
    const std::string_view frac_part = s.substr(dot + 1);
    if (frac_part.size() > 15) throw std::invalid_argument("too many decimal digits: '" + std::string(text) + "'");
    const bool negative = !int_part.empty() && int_part.front() == '-';
    const std::int64_t whole =
        (int_part.empty() || int_part == "-" || int_part == "+") ? 0 : parse_int(int_part, text);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    const std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    if (frac < 0) throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
    const std::int64_t magnitude = (whole < 0 ? -whole : whole) * scale + frac;
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  return Rational(parse_int(s, text));
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

Rational operator*(const Rational& a, const Rational& b) {
  const __int128 n = static_cast<__int128>(a.num_) * b.num_;
  const __int128 d = static_cast<__int128>(a.den_) * b.den_;
  // reduce in 128 bits before narrowing
  __int128 x = n < 0 ? -n : n;
  __int128 y = d;
  while (y != 0) {
    const __int128 r = x % y;
    x = y;
    y = r;
  }
  const __int128 rn = n / x;
  const __int128 rd = d / x;
  if (rn > INT64_MAX || rn < INT64_MIN || rd > INT64_MAX) throw std::overflow_error("rational overflow");
  return Rational(static_cast<std::int64_t>(rn), static_cast<std::int64_t>(rd));
}

}  // namespace burngrid
