#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hpfem/expression.hpp"
#include "support.hpp"

namespace hpfem {
namespace {

TEST(Expression, Arithmetic)
{
  EXPECT_DOUBLE_EQ(Expression::parse("1 + 2*3")(0, 0), 7.0);
  EXPECT_DOUBLE_EQ(Expression::parse("(1 + 2)*3")(0, 0), 9.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2^3^2")(0, 0), 512.0);
  EXPECT_DOUBLE_EQ(Expression::parse("-x^2")(3, 0), -9.0);
  EXPECT_DOUBLE_EQ(Expression::parse("x/y - 1e-1")(1, 4), 0.15);
  EXPECT_DOUBLE_EQ(Expression::parse("pi")(0, 0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(Expression::parse("e")(0, 0), std::numbers::e);
}

TEST(Expression, FunctionsAndParameters)
{
  const Expression f = Expression::parse("a*sin(x) + exp(y) - sqrt(abs(x*y)) + log(2) + cos(0) + tan(0)",
                                         {{"a", 2.5}});
  const double x = 0.7, y = -1.3;
  EXPECT_NEAR(f(x, y), 2.5 * std::sin(x) + std::exp(y) - std::sqrt(std::abs(x * y)) + std::log(2.0) + 1.0,
              1e-15);
}

TEST(Expression, Errors)
{
  EXPECT_THROW(Expression::parse("1 +"), ExpressionError);
  EXPECT_THROW(Expression::parse("foo(x)"), ExpressionError);
  EXPECT_THROW(Expression::parse("z"), ExpressionError);
  EXPECT_THROW(Expression::parse("(x"), ExpressionError);
  EXPECT_THROW(Expression::parse("x y"), ExpressionError);
}

TEST(Expression, DerivativesMatchFiniteDifferences)
{
  for (const char* text : {"(1-x^2)^2*(1-y^2)^2", "sin(x*y)/(2+cos(x))", "exp(-x^2-y)*sqrt(3+y^2)",
                           "(2+x)^y", "log(4+x) - abs(y)^3", "tan(x/3)*y"}) {
    const Expression f = Expression::parse(text);
    const Expression fx = f.derivative('x'), fy = f.derivative('y');
    for (double x : {-0.6, 0.2, 0.9})
      for (double y : {0.3, 0.8}) {
        EXPECT_NEAR(fx(x, y), testing::central_difference([&](double t) { return f(t, y); }, x), 1e-7)
            << text;
        EXPECT_NEAR(fy(x, y), testing::central_difference([&](double t) { return f(x, t); }, y), 1e-7)
            << text;
      }
  }
}

TEST(Expression, ToStringReparses)
{
  const Expression f = Expression::parse("-(x+1)^2/(3-y)*sin(pi*x)");
  const Expression g = Expression::parse(f.to_string());
  EXPECT_DOUBLE_EQ(f(0.3, 0.4), g(0.3, 0.4));
  const Expression d = Expression::parse(f.derivative('y').to_string());
  EXPECT_NEAR(d(0.3, 0.4), f.derivative('y')(0.3, 0.4), 1e-15);
}

} // namespace
} // namespace hpfem
