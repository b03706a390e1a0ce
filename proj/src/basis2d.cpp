#include "hpfem/basis2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hpfem/basis1d.hpp"

namespace hpfem {

void check_degree(int p)
{
  if (p < 1 || p > kMaxDegree)
    throw std::invalid_argument("polynomial degree " + std::to_string(p) + " outside [1, " +
                                std::to_string(kMaxDegree) + "]");
}

int dim_trunk_space(int p)
{
  if (p < 0)
    throw std::invalid_argument("dim_trunk_space: negative degree");
  if (p <= 3)
    return 4 * p;
  return 4 * p + (p - 2) * (p - 3) / 2;
}

int shapes_of_degree(int p)
{
  if (p < 1)
    throw std::invalid_argument("shapes_of_degree: degree must be >= 1");
  if (p <= 3)
    return 4;
  return 4 + (p - 3);
}

int local_index(int s, int p)
{
  if (p < 1 || s < 1 || s > shapes_of_degree(p))
    throw std::invalid_argument("local_index: slot out of range");
  return dim_trunk_space(p - 1) + s;
}

LocalShapeId shapeindx(int m)
{
  if (m < 1)
    throw std::invalid_argument("shapeindx: index must be >= 1");
  int p = 1;
  while (dim_trunk_space(p) < m)
    ++p;
  LocalShapeId id;
  id.m = m;
  id.p = p;
  id.s = m - dim_trunk_space(p - 1);
  if (p == 1) {
    id.kind = ShapeKind::Nodal;
    id.entity_slot = id.s;
  } else if (id.s <= 4) {
    id.kind = ShapeKind::Edge;
    id.entity_slot = id.s;
  } else {
    id.kind = ShapeKind::Bubble;
    id.entity_slot = id.s - 4;
  }
  return id;
}

namespace {

// 1D factors N_1..N_{p+1} and derivatives at a single coordinate.
struct Factors1D {
  std::array<double, kMaxDegree + 2> v{};
  std::array<double, kMaxDegree + 2> d{};

  void fill(int count, double x)
  {
    std::array<double, kMaxDegree + 2> p{}, dp{};
    const int deg = std::max(count - 1, 1);
    legendre_all(deg, x, p, dp);
    v[1] = 0.5 * (1.0 - x);
    d[1] = -0.5;
    v[2] = 0.5 * (1.0 + x);
    d[2] = 0.5;
    for (int m = 3; m <= count; ++m) {
      const double s = 1.0 / std::sqrt(2.0 * (2 * m - 3));
      v[m] = s * (p[m - 1] - p[m - 3]);
      d[m] = s * (dp[m - 1] - dp[m - 3]);
    }
  }
  // phi_q = N_{q+1}
  double phi(int q) const { return v[q + 1]; }
  double dphi(int q) const { return d[q + 1]; }
};

struct PointFactors {
  Factors1D xi, eta, neg_xi, neg_eta;

  PointFactors(int p, RefPoint pt)
  {
    const int count = p + 1;
    xi.fill(count, pt.xi);
    eta.fill(count, pt.eta);
    neg_xi.fill(count, -pt.xi);
    neg_eta.fill(count, -pt.eta);
  }
};

ShapeValue evaluate(const LocalShapeId& id, const PointFactors& f, RefPoint pt)
{
  const double xi = pt.xi, eta = pt.eta;
  switch (id.kind) {
  case ShapeKind::Nodal: {
    static constexpr std::array<double, 4> sx{-1.0, 1.0, 1.0, -1.0};
    static constexpr std::array<double, 4> sy{-1.0, -1.0, 1.0, 1.0};
    const int i = id.entity_slot - 1;
    const double ax = 1.0 + sx[i] * xi;
    const double ay = 1.0 + sy[i] * eta;
    return {0.25 * ax * ay, 0.25 * sx[i] * ay, 0.25 * sy[i] * ax};
  }
  case ShapeKind::Edge: {
    const int q = id.p;
    switch (id.entity_slot) {
    case 1: // eta = -1, traversed in +xi
      return {0.5 * (1.0 - eta) * f.xi.phi(q), 0.5 * (1.0 - eta) * f.xi.dphi(q),
              -0.5 * f.xi.phi(q)};
    case 2: // xi = +1, traversed in +eta
      return {0.5 * (1.0 + xi) * f.eta.phi(q), 0.5 * f.eta.phi(q),
              0.5 * (1.0 + xi) * f.eta.dphi(q)};
    case 3: // eta = +1, traversed in -xi
      return {0.5 * (1.0 + eta) * f.neg_xi.phi(q), -0.5 * (1.0 + eta) * f.neg_xi.dphi(q),
              0.5 * f.neg_xi.phi(q)};
    default: // xi = -1, traversed in -eta
      return {0.5 * (1.0 - xi) * f.neg_eta.phi(q), -0.5 * f.neg_eta.phi(q),
              -0.5 * (1.0 - xi) * f.neg_eta.dphi(q)};
    }
  }
  case ShapeKind::Bubble: {
    const int beta = id.entity_slot;
    const int qx = id.p - (beta + 1);
    const int qy = beta + 1;
    return {f.xi.phi(qx) * f.eta.phi(qy), f.xi.dphi(qx) * f.eta.phi(qy),
            f.xi.phi(qx) * f.eta.dphi(qy)};
  }
  }
  return {};
}

} // namespace

ShapeValue shape2d_eval(int m, RefPoint pt)
{
  const LocalShapeId id = shapeindx(m);
  check_degree(id.p);
  const PointFactors f(id.p, pt);
  return evaluate(id, f, pt);
}

ShapeTable shape2d_eval_all(int p, std::span<const RefPoint> pts)
{
  check_degree(p);
  const int n = dim_trunk_space(p);
  const int npts = static_cast<int>(pts.size());
  std::vector<LocalShapeId> ids;
  ids.reserve(n);
  for (int m = 1; m <= n; ++m)
    ids.push_back(shapeindx(m));

  ShapeTable table;
  table.value.resize(n, npts);
  table.d_xi.resize(n, npts);
  table.d_eta.resize(n, npts);
  for (int k = 0; k < npts; ++k) {
    const PointFactors f(p, pts[k]);
    for (int i = 0; i < n; ++i) {
      const ShapeValue sv = evaluate(ids[i], f, pts[k]);
      table.value(i, k) = sv.value;
      table.d_xi(i, k) = sv.d_xi;
      table.d_eta(i, k) = sv.d_eta;
    }
  }
  return table;
}

} // namespace hpfem
