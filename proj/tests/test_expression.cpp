#include "utb/expression.hpp"
#include "utb/types.hpp"

#include "test_util.hpp"

#include <cmath>

using utb::Expression;

TEST(Expression, EvaluatesArithmeticAndPrecedence) {
  const Expression e = Expression::parse("1 + 2*x1^2 - x2/4", {"x1", "x2"});
  EXPECT_DOUBLE_EQ(e.eval(3.0, 8.0), 1.0 + 18.0 - 2.0);
}

TEST(Expression, PowerIsRightAssociative) {
  const Expression e = Expression::parse("2^3^2", {});
  EXPECT_DOUBLE_EQ(e.eval(std::span<const double>{}), 512.0);
}

TEST(Expression, UnaryMinusAndFunctions) {
  const Expression e = Expression::parse("-sin(s) + cos(s)*exp(s) + log(s) + sqrt(s) + pi", {"s"});
  const double s = 0.7;
  EXPECT_NEAR(e.eval(s), -std::sin(s) + std::cos(s) * std::exp(s) + std::log(s) + std::sqrt(s) + utb::kPi,
              1e-15);
}

TEST(Expression, SymbolicDerivativeMatchesClosedForm) {
  const Expression e = Expression::parse("(2+cos(x1))^2 * x2", {"x1", "x2"});
  const double x1 = 0.4, x2 = 1.3;
  EXPECT_NEAR(e.derivative(0).eval(x1, x2), -2.0 * (2.0 + std::cos(x1)) * std::sin(x1) * x2, 1e-14);
  EXPECT_NEAR(e.derivative(1).eval(x1, x2), std::pow(2.0 + std::cos(x1), 2), 1e-14);
}

TEST(Expression, SecondDerivativeOfQuotient) {
  const Expression e = Expression::parse("1/(1+s^2)", {"s"});
  const double s = 0.3;
  const double expected = (6.0 * s * s - 2.0) / std::pow(1.0 + s * s, 3);
  EXPECT_NEAR(e.derivative(0).derivative(0).eval(s), expected, 1e-13);
}

TEST(Expression, RejectsUnknownIdentifier) {
  EXPECT_EQ(error_kind_of([] { Expression::parse("x3 + 1", {"x1", "x2"}); }), utb::ErrorKind::ParseError);
}

TEST(Expression, RejectsMalformedInput) {
  EXPECT_EQ(error_kind_of([] { Expression::parse("(1 + ", {"s"}); }), utb::ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([] { Expression::parse("1 2", {"s"}); }), utb::ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([] { Expression::parse("", {"s"}); }), utb::ErrorKind::ParseError);
}

TEST(Expression, ConstantIgnoresVariables) {
  const Expression c = Expression::constant(2.5, {"x1", "x2"});
  EXPECT_DOUBLE_EQ(c.eval(100.0, -3.0), 2.5);
  EXPECT_DOUBLE_EQ(c.derivative(1).eval(1.0, 1.0), 0.0);
}
