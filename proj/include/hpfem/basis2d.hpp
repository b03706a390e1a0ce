#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hpfem {

/// Largest polynomial degree accepted anywhere in the library.
inline constexpr int kMaxDegree = 12;

/// Throws std::invalid_argument unless 1 <= p <= kMaxDegree.
void check_degree(int p);

struct RefPoint {
  double xi = 0.0;
  double eta = 0.0;
};

enum class ShapeKind { Nodal, Edge, Bubble };

/// Decoded local index of a shape function on the reference square.
struct LocalShapeId {
  int m = 0;           // local index, 1-based
  int p = 0;           // polynomial degree
  int s = 0;           // slot within the degree: node, edge, or 4 + bubble index
  ShapeKind kind = ShapeKind::Nodal;
  int entity_slot = 0; // node 1-4, edge 1-4, or bubble index beta

  friend bool operator==(const LocalShapeId&, const LocalShapeId&) = default;
};

struct ShapeValue {
  double value = 0.0;
  double d_xi = 0.0;
  double d_eta = 0.0;
};

/// Dimension of the trunk space S^p on the reference square (0 for p = 0).
int dim_trunk_space(int p);

/// Number of shape functions of exactly degree p.
int shapes_of_degree(int p);

/// Inverse of local_index: decode m into degree, slot and kind.
LocalShapeId shapeindx(int m);

/// Local index m of the slot-s function of degree p.
int local_index(int s, int p);

/// Shape function m and its reference gradient at pt.
ShapeValue shape2d_eval(int m, RefPoint pt);

/// All shape functions of S^p at a batch of points.
struct ShapeTable {
  Eigen::MatrixXd value; // n_{p,ref} x num_points
  Eigen::MatrixXd d_xi;
  Eigen::MatrixXd d_eta;

  int num_shapes() const { return static_cast<int>(value.rows()); }
  int num_points() const { return static_cast<int>(value.cols()); }
  ShapeValue at(int shape, int point) const
  {
    return {value(shape, point), d_xi(shape, point), d_eta(shape, point)};
  }
};

ShapeTable shape2d_eval_all(int p, std::span<const RefPoint> pts);

} // namespace hpfem
