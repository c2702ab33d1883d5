#include "doctest.h"

#include "dre/core/linear_expression.hpp"
#include "dre/core/rational.hpp"

using dre::LinearExpression;
using dre::Rational;

TEST_CASE("rationals parse from fractions, integers and decimals exactly") {
  CHECK(dre::parse_rational("3/6") == Rational(1) / 2);
  CHECK(dre::parse_rational("-7") == Rational(-7));
  CHECK(dre::parse_rational("12.375") == Rational(99) / 8);
  CHECK(dre::parse_rational("0.001") == Rational(1) / 1000);
  CHECK(dre::to_string(Rational(-3) / 9) == "-1/3");
  CHECK(dre::to_string(Rational(20)) == "20");
  CHECK_THROWS(dre::parse_rational("1/0"));
  CHECK_THROWS(dre::parse_rational("abc"));
  CHECK_THROWS(dre::parse_rational("1/"));
}

TEST_CASE("floor rounds toward negative infinity") {
  CHECK(dre::floor(Rational(7) / 2) == 3);
  CHECK(dre::floor(Rational(-7) / 2) == -4);
  CHECK(dre::floor(Rational(-4)) == -4);
}

TEST_CASE("linear expressions drop zero coefficients and substitute simultaneously") {
  auto x = LinearExpression::symbol("x");
  auto y = LinearExpression::symbol("y");
  LinearExpression e = x * Rational(2) + y - x * Rational(2) + Rational(3);
  CHECK(e.terms().size() == 1);
  CHECK(e.coefficient("x") == 0);

  // x := y, y := x swaps instead of chaining.
  LinearExpression f = x - y;
  auto swapped = f.substitute({{"x", y}, {"y", x}});
  CHECK(swapped == y - x);

  CHECK(e.evaluate({{"y", Rational(4)}}) == 7);
  CHECK_THROWS_AS(e.evaluate({}), std::out_of_range);
  CHECK(e.str() == "y + 3");
  CHECK((x * Rational(-1, 2) + Rational(-1)).str() == "-1/2*x - 1");
}
