#include "hpfem/dofmap.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace hpfem {

long long global_dim(long long nodes, long long edges, long long elements, int p)
{
  if (p < 1)
    throw std::invalid_argument("global_dim: degree must be >= 1");
  long long n = nodes + (p - 1) * edges;
  if (p >= 4)
    n += static_cast<long long>(p - 2) * (p - 3) / 2 * elements;
  return n;
}

long long global_dim(const Mesh& mesh, int p)
{
  return global_dim(mesh.num_nodes(), mesh.num_edges(), mesh.num_elements(), p);
}

DofMap::DofMap(const Mesh& mesh, int p, SignRule rule)
    : p_(p), n_local_(0), n_global_(0), rule_(rule),
      counts_{mesh.num_nodes(), mesh.num_edges(), mesh.num_elements()}
{
  check_degree(p);
  const long long n = global_dim(mesh, p);
  if (n > std::numeric_limits<int>::max())
    throw std::invalid_argument("DofMap: global dimension exceeds int range");
  n_global_ = static_cast<int>(n);
  n_local_ = dim_trunk_space(p);

  const int nn = mesh.num_nodes(), ne = mesh.num_edges(), nt = mesh.num_elements();

  // first global index of the edge block of each degree q >= 2
  std::vector<int> edge_offset(p + 1, 0), bubble_offset(p + 1, 0);
  attributes_.reserve(n_global_);
  for (int i = 0; i < nn; ++i)
    attributes_.push_back({1, i + 1, 0, 0, 0});
  for (int q = 2; q <= p; ++q) {
    edge_offset[q] = static_cast<int>(attributes_.size());
    for (int e = 0; e < ne; ++e)
      attributes_.push_back({q, 0, e + 1, 0, 0});
    bubble_offset[q] = static_cast<int>(attributes_.size());
    for (int k = 0; k < nt && q >= 4; ++k)
      for (int beta = 1; beta <= q - 3; ++beta)
        attributes_.push_back({q, 0, 0, k + 1, beta});
  }

  conn_.resize(static_cast<std::size_t>(n_local_) * nt);
  sign_.assign(static_cast<std::size_t>(n_local_) * nt, 1);
  std::vector<LocalShapeId> ids;
  for (int m = 1; m <= n_local_; ++m)
    ids.push_back(shapeindx(m));

  for (int k = 0; k < nt; ++k) {
    for (int l = 0; l < n_local_; ++l) {
      const LocalShapeId& id = ids[l];
      const std::size_t at = static_cast<std::size_t>(k) * n_local_ + l;
      switch (id.kind) {
      case ShapeKind::Nodal:
        conn_[at] = mesh.elements()[k][id.entity_slot - 1];
        break;
      case ShapeKind::Edge: {
        const int j = id.entity_slot - 1;
        const int e = mesh.element_edges(k)[j];
        conn_[at] = edge_offset[id.p] + e;
        if (rule_ == SignRule::Alternating && id.p % 2 == 1 && !mesh.is_boundary_edge(e) &&
            mesh.edge_orientation(k, j) == 1)
          sign_[at] = -1;
        break;
      }
      case ShapeKind::Bubble:
        conn_[at] = bubble_offset[id.p] + k * (id.p - 3) + (id.entity_slot - 1);
        break;
      }
    }
  }
}

std::vector<double> embed_coefficients(std::span<const double> coeffs, const DofMap& from,
                                       const DofMap& to)
{
  if (from.mesh_counts() != to.mesh_counts())
    throw std::invalid_argument("embed_coefficients: degree maps belong to different meshes");
  if (from.degree() > to.degree())
    throw std::invalid_argument("embed_coefficients: target degree is lower than source degree");
  if (coeffs.size() != static_cast<std::size_t>(from.num_global()))
    throw std::invalid_argument("embed_coefficients: coefficient length does not match source");
  std::vector<double> out(to.num_global(), 0.0);
  std::copy(coeffs.begin(), coeffs.end(), out.begin());
  return out;
}

FieldValue evaluate_field(const Mesh& mesh, const DofMap& dofmap, std::span<const double> coeffs,
                          int k, RefPoint pt)
{
  if (coeffs.size() != static_cast<std::size_t>(dofmap.num_global()))
    throw std::invalid_argument("evaluate_field: coefficient length mismatch");
  const ShapeTable t = shape2d_eval_all(dofmap.degree(), std::span<const RefPoint>(&pt, 1));
  double v = 0.0, gxi = 0.0, geta = 0.0;
  const auto dofs = dofmap.element_dofs(k);
  const auto signs = dofmap.element_signs(k);
  for (int l = 0; l < dofmap.num_local(); ++l) {
    const double c = signs[l] * coeffs[dofs[l]];
    v += c * t.value(l, 0);
    gxi += c * t.d_xi(l, 0);
    geta += c * t.d_eta(l, 0);
  }
  const Jacobian J = iso_jacobian(mesh.element_coords(k), pt);
  // grad_x = J^{-T} grad_ref
  const double inv = 1.0 / J.det;
  return {v, inv * (J.dy_deta * gxi - J.dy_dxi * geta), inv * (-J.dx_deta * gxi + J.dx_dxi * geta)};
}

} // namespace hpfem
