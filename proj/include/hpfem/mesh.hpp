#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "hpfem/basis2d.hpp"

namespace hpfem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = -1.0, x1 = 1.0;
  double y0 = -1.0, y1 = 1.0;
};

using ElementCoords = std::array<Point2, 4>;

/// Thrown when the geometry map of an element is inverted or degenerate.
class NonPositiveJacobian : public std::runtime_error {
public:
  NonPositiveJacobian(double det, RefPoint at);
  double det() const { return det_; }

private:
  double det_;
};

class MeshError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Conforming quadrilateral mesh.
 *
 * All indices are 0-based. Element nodes are counterclockwise; local edge j
 * joins local node j to local node (j + 1) mod 4. Edges are stored with the
 * smaller node index first and numbered in lexicographic order of that pair.
 * A mesh never changes after construction.
 */
class Mesh {
public:
  using Element = std::array<int, 4>;
  using Edge = std::array<int, 2>;

  /// Builds edges and incidence; throws MeshError on invalid input.
  Mesh(std::vector<Point2> nodes, std::vector<Element> elements);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }

  const std::vector<Point2>& nodes() const { return nodes_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const std::array<int, 4>& element_edges(int k) const { return elem2edge_[k]; }
  /// +1 if local edge j of element k runs from the smaller to the larger node index.
  int edge_orientation(int k, int j) const { return elem2edge_orient_[k][j]; }
  /// Number of elements sharing edge e (1 on the boundary, 2 inside).
  int edge_multiplicity(int e) const { return edge_count_[e]; }
  bool is_boundary_edge(int e) const { return edge_count_[e] == 1; }

  ElementCoords element_coords(int k) const;
  double element_area(int k) const;
  double total_area() const;

private:
  std::vector<Point2> nodes_;
  std::vector<Element> elements_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 4>> elem2edge_;
  std::vector<std::array<int, 4>> elem2edge_orient_;
  std::vector<int> edge_count_;
};

/// Tensor grid of nx x ny rectangles; nodes row-major with x fastest.
Mesh rectangulate(const Rect& domain, int nx, int ny);

/// 2^level x 2^level grid of the reference square [-1, 1]^2.
Mesh uniform_square_mesh(int level);

/// Splits every element into four through edge midpoints and the element centre.
Mesh refine_uniform(const Mesh& mesh);

struct Jacobian {
  // rows: (dx/dxi, dx/deta), (dy/dxi, dy/deta)
  double dx_dxi = 0.0, dx_deta = 0.0;
  double dy_dxi = 0.0, dy_deta = 0.0;
  double det = 0.0;
};

inline constexpr double kJacobianTolerance = 1e-14;

/// Bilinear image Q(xi, eta) of a reference point.
Point2 iso_map(const ElementCoords& element, RefPoint pt);

/// Jacobian of Q; throws NonPositiveJacobian if det <= kJacobianTolerance.
Jacobian iso_jacobian(const ElementCoords& element, RefPoint pt);

/// True when the element is an axis-aligned rectangle with node 1 at its lower-left corner.
bool is_axis_aligned_rectangle(const ElementCoords& element, double rel_tol = 1e-12);

/// Mesh file: JSON with "nodes" ([x, y] pairs), "elements" (1-based node quadruples)
/// and optionally "edges" (1-based pairs, ignored on read and recomputed).
Mesh read_mesh(const std::filesystem::path& file);
void write_mesh(const Mesh& mesh, const std::filesystem::path& file);

} // namespace hpfem
