#include "doctest.h"

#include <stdexcept>

#include "burngrid/rational.hpp"

using burngrid::Rational;

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational::parse("3/2") == Rational(3, 2));
  CHECK(Rational::parse("6/4") == Rational(3, 2));
  CHECK(Rational::parse("1.25") == Rational(5, 4));
  CHECK(Rational::parse("-0.5") == Rational(-1, 2));
  CHECK(Rational::parse(" 4/3 ") == Rational(4, 3));
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/2/3"), std::invalid_argument);
}

TEST_CASE("rational arithmetic and order") {
  CHECK(Rational(2, 4).num() == 1);
  CHECK(Rational(2, 4).den() == 2);
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(5, 4) > Rational(1));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(3, 2).str() == "3/2");
  CHECK(Rational(4).str() == "4");
  CHECK(Rational(1, 4).to_double() == doctest::Approx(0.25));
  CHECK(Rational(3).is_integer());
}
