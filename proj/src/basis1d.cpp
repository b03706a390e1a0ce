#include "hpfem/basis1d.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace hpfem {

void legendre_all(int n, double x, std::span<double> values)
{
  assert(n >= 0 && values.size() >= static_cast<std::size_t>(n + 1));
  values[0] = 1.0;
  if (n == 0)
    return;
  values[1] = x;
  for (int k = 1; k < n; ++k)
    values[k + 1] = ((2 * k + 1) * x * values[k] - k * values[k - 1]) / (k + 1);
}

void legendre_all(int n, double x, std::span<double> values, std::span<double> derivs)
{
  legendre_all(n, x, values);
  assert(derivs.size() >= static_cast<std::size_t>(n + 1));
  derivs[0] = 0.0;
  if (n == 0)
    return;
  derivs[1] = 1.0;
  // P'_{k+1} = P'_{k-1} + (2k+1) P_k
  for (int k = 1; k < n; ++k)
    derivs[k + 1] = derivs[k - 1] + (2 * k + 1) * values[k];
}

double legendre_eval(int n, double x)
{
  if (n < 0)
    throw std::invalid_argument("legendre_eval: negative degree");
  if (n == 0)
    return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2 * k + 1) * x * cur - k * prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double legendre_deriv(int n, double x)
{
  if (n < 0)
    throw std::invalid_argument("legendre_deriv: negative degree");
  if (n == 0)
    return 0.0;
  double p_prev = 1.0, p_cur = x;
  double d_prev = 0.0, d_cur = 1.0;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2 * k + 1) * x * p_cur - k * p_prev) / (k + 1);
    const double d_next = d_prev + (2 * k + 1) * p_cur;
    p_prev = p_cur;
    p_cur = p_next;
    d_prev = d_cur;
    d_cur = d_next;
  }
  return d_cur;
}

namespace {

double shape_scale(int m) { return 1.0 / std::sqrt(2.0 * (2 * m - 3)); }

} // namespace

double shape1d_eval(int m, double xi)
{
  if (m < 1)
    throw std::invalid_argument("shape1d_eval: index must be >= 1");
  if (m == 1)
    return 0.5 * (1.0 - xi);
  if (m == 2)
    return 0.5 * (1.0 + xi);
  return shape_scale(m) * (legendre_eval(m - 1, xi) - legendre_eval(m - 3, xi));
}

double shape1d_deriv(int m, double xi)
{
  if (m < 1)
    throw std::invalid_argument("shape1d_deriv: index must be >= 1");
  if (m == 1)
    return -0.5;
  if (m == 2)
    return 0.5;
  return shape_scale(m) * (legendre_deriv(m - 1, xi) - legendre_deriv(m - 3, xi));
}

void shape1d_eval_batch(int count, std::span<const double> xs, std::span<double> values,
                        std::span<double> derivs)
{
  if (count < 1)
    throw std::invalid_argument("shape1d_eval_batch: count must be >= 1");
  const std::size_t npts = xs.size();
  if (values.size() < count * npts)
    throw std::invalid_argument("shape1d_eval_batch: output too small");
  const bool want_derivs = !derivs.empty();
  if (want_derivs && derivs.size() < count * npts)
    throw std::invalid_argument("shape1d_eval_batch: derivative output too small");

  const int max_deg = std::max(count - 1, 1);
  std::vector<double> p(max_deg + 1), dp(max_deg + 1);
  for (std::size_t k = 0; k < npts; ++k) {
    const double x = xs[k];
    legendre_all(max_deg, x, p, dp);
    for (int m = 1; m <= count; ++m) {
      double v, d;
      if (m == 1) {
        v = 0.5 * (1.0 - x);
        d = -0.5;
      } else if (m == 2) {
        v = 0.5 * (1.0 + x);
        d = 0.5;
      } else {
        const double s = shape_scale(m);
        v = s * (p[m - 1] - p[m - 3]);
        d = s * (dp[m - 1] - dp[m - 3]);
      }
      values[(m - 1) * npts + k] = v;
      if (want_derivs)
        derivs[(m - 1) * npts + k] = d;
    }
  }
}

} // namespace hpfem
