#include "hpfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hpfem/basis1d.hpp"

namespace hpfem {

GaussRule1D gauss_rule_1d(int n)
{
  if (n < 1 || n > kMaxGaussPoints)
    throw std::invalid_argument("gauss_rule_1d: point count must be in [1, 64]");

  GaussRule1D rule;
  rule.points.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  // roots come in +/- pairs; Newton on the positive half only
  for (int i = 0; i < n / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre_eval(n, x) / legendre_deriv(n, x);
      x -= dx;
      if (std::abs(dx) <= 1e-15)
        break;
    }
    const double d = legendre_deriv(n, x);
    const double w = 2.0 / ((1.0 - x * x) * d * d);
    rule.points[n - 1 - i] = x;
    rule.points[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) {
    const double d = legendre_deriv(n, 0.0);
    rule.weights[n / 2] = 2.0 / (d * d);
  }
  return rule;
}

QuadRule tensor_gauss_rule(int n)
{
  const GaussRule1D g = gauss_rule_1d(n);
  QuadRule rule;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      rule.points.push_back({g.points[i], g.points[j]});
      rule.weights.push_back(g.weights[i] * g.weights[j]);
    }
  return rule;
}

QuadRule intrec_hp(int p)
{
  if (p < 1)
    throw std::invalid_argument("intrec_hp: degree must be >= 1");
  return tensor_gauss_rule(p + 1);
}

} // namespace hpfem
