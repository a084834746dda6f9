#include <doctest.h>

#include <filtlab/rational.hpp>
#include <filtlab/error.hpp>

using namespace filtlab;

TEST_CASE("rationals stay in lowest terms with a positive denominator") {
  CHECK(Rational(6, 4).str() == "3/2");
  CHECK(Rational(-6, 4).str() == "-3/2");
  CHECK(Rational(6, -4).str() == "-3/2");
  CHECK(Rational(0, 7).str() == "0");
  CHECK(Rational(5, 1).str() == "5");
  CHECK((Rational(1, 3) + Rational(1, 6)).str() == "1/2");
  CHECK((Rational(1, 3) * Rational(3, 7)).str() == "1/7");
  CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("parse accepts the canonical grammar only") {
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational::parse("12") == Rational(12));
  CHECK(Rational::parse("6/4") == Rational(3, 2));
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse(""), Error);
  CHECK_THROWS_AS(Rational::parse("1.5"), Error);
  CHECK_THROWS_AS(Rational::parse("1/-2"), Error);
  CHECK_THROWS_AS(Rational::parse(" 1/2"), Error);
}

TEST_CASE("guarded ratio follows the 0/0 = 0 convention") {
  CHECK(ratio_or_zero(Rational(0), Rational(0)) == Rational(0));
  CHECK(ratio_or_zero(Rational(3), Rational(2)) == Rational(3, 2));
  CHECK_THROWS_WITH_AS(ratio_or_zero(Rational(1), Rational(0)),
                       doctest::Contains("DegenerateDenominator"), Error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
}
