#include <doctest.h>

#include <cmath>

#include "hpmc/expr.hpp"

using namespace hpmc;

TEST_CASE("expression grammar") {
  CHECK(parse_expression("2")(0, 0) == 2.0);
  CHECK(parse_expression("-3.5e-1")(1, 1) == doctest::Approx(-0.35));
  CHECK(parse_expression("x + 2*y")(1.0, 2.0) == doctest::Approx(5.0));
  CHECK(parse_expression("x^2 - y^2/2")(3.0, 2.0) == doctest::Approx(7.0));
  CHECK(parse_expression("r")(3.0, 4.0) == doctest::Approx(5.0));
  CHECK(parse_expression("sqrt(1-r^2)")(0.6, 0.0) == doctest::Approx(0.8));
  CHECK(parse_expression("sin(x)*cos(y)+exp(0)")(0.5, 0.25) ==
        doctest::Approx(std::sin(0.5) * std::cos(0.25) + 1.0));
  CHECK(parse_expression("2^3^1")(0, 0) == doctest::Approx(8.0));
  CHECK(parse_expression("-x^2")(2.0, 0.0) == doctest::Approx(-4.0));
  CHECK(parse_expression("(1+2)*(3-1)")(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("expression errors") {
  CHECK_THROWS_AS(parse_expression(""), ConfigError);
  CHECK_THROWS_AS(parse_expression("1 +"), ConfigError);
  CHECK_THROWS_AS(parse_expression("foo(2)"), ConfigError);
  CHECK_THROWS_AS(parse_expression("sin 2"), ConfigError);
  CHECK_THROWS_AS(parse_expression("(1"), ConfigError);
  CHECK_THROWS_AS(parse_expression("1 2"), ConfigError);
}
