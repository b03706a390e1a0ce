#pragma once

// Independent oracles and reference data shared by the unit and acceptance tests.

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "hpfem/dofmap.hpp"
#include "hpfem/mesh.hpp"

namespace hpfem::testing {

/// P_n(x) from the explicit sum 2^-n sum_k (-1)^k C(n,k) C(2n-2k, n) x^(n-2k).
inline double legendre_explicit(int n, double x)
{
  auto binom = [](int a, int b) {
    double r = 1.0;
    for (int i = 1; i <= b; ++i)
      r = r * (a - b + i) / i;
    return r;
  };
  double s = 0.0;
  for (int k = 0; 2 * k <= n; ++k)
    s += ((k % 2) ? -1.0 : 1.0) * binom(n, k) * binom(2 * n - 2 * k, n) * std::pow(x, n - 2 * k);
  return s / std::pow(2.0, n);
}

/// Centered difference with step h.
template <typename F>
double central_difference(F&& f, double x, double h = 1e-6)
{
  return (f(x + h) - f(x - h)) / (2 * h);
}

/// Reference point at parameter t in [-1, 1] along local edge j (0-based), in traversal direction.
inline RefPoint edge_point(int j, double t)
{
  switch (j) {
  case 0: return {t, -1.0};
  case 1: return {1.0, t};
  case 2: return {-t, 1.0};
  default: return {-1.0, -t};
  }
}

struct ContinuityReport {
  double max_jump = 0.0;          // over all global functions
  double max_jump_odd_edge = 0.0; // over odd-degree edge functions
  int interior_edges = 0;
};

/// Evaluates every global function from both sides of every interior edge.
inline ContinuityReport check_edge_continuity(const Mesh& mesh, const DofMap& dofmap,
                                              int samples = 20)
{
  // element-local edge slots of each edge
  std::vector<std::vector<std::pair<int, int>>> owners(mesh.num_edges());
  for (int k = 0; k < mesh.num_elements(); ++k)
    for (int j = 0; j < 4; ++j)
      owners[mesh.element_edges(k)[j]].push_back({k, j});

  const int n = dofmap.num_local();
  ContinuityReport rep;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (owners[e].size() != 2)
      continue;
    ++rep.interior_edges;
    const auto [k1, j1] = owners[e][0];
    const auto [k2, j2] = owners[e][1];
    for (int s = 0; s < samples; ++s) {
      const double t = -1.0 + 2.0 * (s + 0.5) / samples;
      // both elements traverse the shared edge in opposite directions
      const RefPoint p1 = edge_point(j1, t);
      const RefPoint p2 = edge_point(j2, -t);
      std::map<int, double> side1, side2;
      for (int l = 0; l < n; ++l) {
        side1[dofmap.global_index(l, k1)] += dofmap.sign(l, k1) * shape2d_eval(l + 1, p1).value;
        side2[dofmap.global_index(l, k2)] += dofmap.sign(l, k2) * shape2d_eval(l + 1, p2).value;
      }
      std::map<int, double> jump = side1;
      for (const auto& [g, v] : side2)
        jump[g] -= v;
      for (const auto& [g, v] : jump) {
        rep.max_jump = std::max(rep.max_jump, std::abs(v));
        const DofAttributes& a = dofmap.attributes()[g];
        if (a.edge != 0 && a.degree % 2 == 1)
          rep.max_jump_odd_edge = std::max(rep.max_jump_odd_edge, std::abs(v));
      }
    }
  }
  return rep;
}

/// Table 1: per degree (nodal, edge, bubble, total).
inline const std::array<std::array<int, 4>, 7> kShapeCounts{{
    {4, 0, 0, 4},
    {4, 4, 0, 8},
    {4, 8, 0, 12},
    {4, 12, 1, 17},
    {4, 16, 3, 23},
    {4, 20, 6, 30},
    {4, 24, 10, 38},
}};

/// Table 3: B for one element at p = 5 (degree, node, edge, element, bubble; 0 = '-').
inline const std::vector<DofAttributes> kTableB{
    {1, 1, 0, 0, 0}, {1, 2, 0, 0, 0}, {1, 3, 0, 0, 0}, {1, 4, 0, 0, 0},
    {2, 0, 1, 0, 0}, {2, 0, 2, 0, 0}, {2, 0, 3, 0, 0}, {2, 0, 4, 0, 0},
    {3, 0, 1, 0, 0}, {3, 0, 2, 0, 0}, {3, 0, 3, 0, 0}, {3, 0, 4, 0, 0},
    {4, 0, 1, 0, 0}, {4, 0, 2, 0, 0}, {4, 0, 3, 0, 0}, {4, 0, 4, 0, 0}, {4, 0, 0, 1, 1},
    {5, 0, 1, 0, 0}, {5, 0, 2, 0, 0}, {5, 0, 3, 0, 0}, {5, 0, 4, 0, 0}, {5, 0, 0, 1, 1},
    {5, 0, 0, 1, 2},
};

/// Table 4: C (1-based) and S for the two-element mesh at p = 3, columns T1, T2.
inline const std::array<std::array<int, 2>, 12> kTableC{{
    {1, 2}, {2, 3}, {5, 6}, {4, 5}, {7, 9}, {10, 11},
    {12, 13}, {8, 10}, {14, 16}, {17, 18}, {19, 20}, {15, 17},
}};
inline const std::array<std::array<int, 2>, 12> kTableS{{
    {1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1},
    {1, 1}, {1, 1}, {1, 1}, {-1, 1}, {1, 1}, {1, 1},
}};

/// Table 5 as printed: mantissa * 10^exponent with two significant figures.
struct Printed {
  double mantissa;
  int exponent;
};
/// rows: levels 2..9; columns n_1..n_5, |N|, |E|, |T|
inline const std::array<std::array<Printed, 8>, 8> kTable5{{
    {{{2.5, 1}, {6.5, 1}, {1.1, 2}, {1.6, 2}, {2.3, 2}, {2.5, 1}, {4.0, 1}, {1.6, 1}}},
    {{{8.1, 1}, {2.3, 2}, {3.7, 2}, {5.8, 2}, {8.5, 2}, {8.1, 1}, {1.4, 2}, {6.4, 1}}},
    {{{2.9, 2}, {8.3, 2}, {1.4, 3}, {2.2, 3}, {3.2, 3}, {2.9, 2}, {5.4, 2}, {2.6, 2}}},
    {{{1.1, 3}, {3.2, 3}, {5.3, 3}, {8.4, 3}, {1.3, 4}, {1.1, 3}, {2.1, 3}, {1.0, 3}}},
    {{{4.2, 3}, {1.3, 4}, {2.1, 4}, {3.3, 4}, {5.0, 4}, {4.2, 3}, {8.3, 3}, {4.1, 3}}},
    {{{1.7, 4}, {5.0, 4}, {8.3, 4}, {1.3, 5}, {2.0, 5}, {1.7, 4}, {3.3, 4}, {1.6, 4}}},
    {{{6.6, 4}, {2.0, 5}, {3.3, 5}, {5.3, 5}, {7.9, 5}, {6.6, 4}, {1.3, 5}, {6.6, 4}}},
    {{{2.6, 5}, {7.9, 5}, {1.3, 6}, {2.1, 6}, {3.2, 6}, {2.6, 5}, {5.3, 5}, {2.6, 5}}},
}};

/// True if value rounds to the printed two-significant-figure number.
inline bool rounds_to(long long value, Printed printed)
{
  const double scale = std::pow(10.0, printed.exponent - 1);
  return std::llround(static_cast<double>(value) / scale) == std::llround(printed.mantissa * 10);
}

/// Reference element of the isoparametric example.
inline const ElementCoords kExample3Quad{{{4.5, 1.5}, {8.0, -0.5}, {7.0, 2.5}, {6.0, 4.0}}};

} // namespace hpfem::testing
