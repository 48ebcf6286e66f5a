#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wg3d/expression.hpp"

using namespace wg3d;

namespace {
double ev(const std::string& s, double x = 0, double y = 0, double z = 0) {
  return ExprParser::parse(s)->eval(x, y, z);
}
double dev(const std::string& s, int d, double x, double y, double z) {
  return ExprParser::parse(s)->diff(d)->eval(x, y, z);
}
}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(ev("2+3*4") == 14.0);
  CHECK(ev("(2+3)*4") == 20.0);
  CHECK(ev("2-3-4") == -5.0);       // left associative
  CHECK(ev("12/3/2") == 2.0);
  CHECK(ev("-x+3", 1.0) == 2.0);
  CHECK(ev("2^3") == 8.0);
  CHECK(ev("-2^2") == -4.0);        // unary minus binds looser than ^
  CHECK(ev("x^2*y", 3.0, 2.0) == 18.0);
  CHECK(ev("  1.5 + .5 ") == 2.0);
  CHECK(ev("pi") == Catch::Approx(M_PI));
}

TEST_CASE("variables and functions") {
  CHECK(ev("x*y*z", 2, 3, 4) == 24.0);
  CHECK(ev("sin(pi*x)", 0.5) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(ev("cos(0)") == 1.0);
  CHECK(ev("tan(pi/4)") == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(ev("exp(log(5))") == Catch::Approx(5.0).epsilon(1e-14));
  CHECK(ev("sqrt(2)*sqrt(2)") == Catch::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("symbolic differentiation") {
  CHECK(dev("x^3", 0, 2, 0, 0) == Catch::Approx(12.0).epsilon(1e-14));
  CHECK(dev("x*y", 1, 3, 0, 0) == 3.0);
  CHECK(dev("x*y", 2, 3, 5, 0) == 0.0);
  CHECK(dev("sin(x)*cos(y)", 1, 0.3, 0.7, 0) ==
        Catch::Approx(-std::sin(0.3) * std::sin(0.7)).epsilon(1e-14));
  CHECK(dev("exp(2*x)", 0, 0.4, 0, 0) ==
        Catch::Approx(2.0 * std::exp(0.8)).epsilon(1e-14));
  CHECK(dev("log(x)", 0, 4.0, 0, 0) == Catch::Approx(0.25).epsilon(1e-14));
  CHECK(dev("sqrt(x)", 0, 9.0, 0, 0) == Catch::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(dev("tan(x)", 0, 0.2, 0, 0) ==
        Catch::Approx(1.0 / (std::cos(0.2) * std::cos(0.2))).epsilon(1e-13));
  CHECK(dev("x/y", 1, 1.0, 2.0, 0) == Catch::Approx(-0.25).epsilon(1e-14));
  // Second derivatives through repeated diff.
  auto u = ExprParser::parse("sin(pi*x)*sin(pi*y)");
  double uxx = u->diff(0)->diff(0)->eval(0.3, 0.4, 0);
  CHECK(uxx == Catch::Approx(-M_PI * M_PI * std::sin(M_PI * 0.3) * std::sin(M_PI * 0.4))
                   .epsilon(1e-13));
}

TEST_CASE("constant folding") {
  auto e = ExprParser::parse("0*x + 2*3");
  REQUIRE(e->kind == Expr::Kind::Const);
  CHECK(e->value == 6.0);
  CHECK(ExprParser::parse("x-x+0")->diff(1)->is_constant_zero());
  CHECK(ExprParser::parse("y")->diff(0)->is_constant_zero());
  CHECK_FALSE(ExprParser::parse("y")->diff(1)->is_constant_zero());
}

TEST_CASE("parse and evaluation errors") {
  CHECK_THROWS_AS(ExprParser::parse("x+"), std::invalid_argument);
  CHECK_THROWS_AS(ExprParser::parse("(x"), std::invalid_argument);
  CHECK_THROWS_AS(ExprParser::parse("x y"), std::invalid_argument);
  CHECK_THROWS_AS(ExprParser::parse("w+1"), std::invalid_argument);
  CHECK_THROWS_AS(ExprParser::parse("1 @ 2"), std::invalid_argument);
  CHECK_THROWS_AS(ExprParser::parse(""), std::invalid_argument);
  // Unknown functions parse but fail on use.
  auto call = ExprParser::parse("foo(x)");
  CHECK_THROWS_AS(call->eval(1, 0, 0), std::invalid_argument);
  // Only constant exponents can be differentiated.
  CHECK_THROWS_AS(ExprParser::parse("x^y")->diff(0), std::invalid_argument);
}
