#pragma once

#include <vector>

#include "hpfem/basis2d.hpp"

namespace hpfem {

struct GaussRule1D {
  std::vector<double> points;  // ascending
  std::vector<double> weights;
};

/// Tensor-product rule on [-1, 1]^2.
struct QuadRule {
  std::vector<RefPoint> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

inline constexpr int kMaxGaussPoints = 64;

/// n-point Gauss-Legendre rule, 1 <= n <= 64; throws std::invalid_argument otherwise.
GaussRule1D gauss_rule_1d(int n);

/// n x n tensor rule.
QuadRule tensor_gauss_rule(int n);

/// Default rule for degree p: (p + 1) x (p + 1) points.
QuadRule intrec_hp(int p);

} // namespace hpfem
