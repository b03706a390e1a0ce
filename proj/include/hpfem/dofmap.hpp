#pragma once

#include <array>
#include <span>
#include <vector>

#include "hpfem/basis2d.hpp"
#include "hpfem/mesh.hpp"

namespace hpfem {

/// How local edge functions of odd degree are signed on shared edges.
enum class SignRule {
  /// On an interior edge, the element whose local traversal runs from the
  /// smaller to the larger global node index takes sign -1. Boundary edges
  /// and even degrees keep +1.
  Alternating,
  /// Every sign is +1. Odd-degree edge functions are then discontinuous.
  Disabled,
};

/// One row of the attribute table. Entity indices are 1-based; 0 marks "unused".
struct DofAttributes {
  int degree = 0;
  int node = 0;
  int edge = 0;
  int element = 0;
  int bubble = 0;

  friend bool operator==(const DofAttributes&, const DofAttributes&) = default;
};

/// Global dimension n_p of S^p on the mesh.
long long global_dim(const Mesh& mesh, int p);
long long global_dim(long long nodes, long long edges, long long elements, int p);

/**
 * Global indexing of the hierarchic basis on a mesh.
 *
 * Global functions are ordered in degree blocks: nodes, then for each degree
 * q = 2..p all edge functions in edge order followed (q >= 4) by the bubbles
 * of every element. The table for degree p1 is therefore a prefix of the one
 * for p2 > p1.
 *
 * C and S are stored per element; global indices are 0-based in the API and
 * printed 1-based.
 */
class DofMap {
public:
  DofMap(const Mesh& mesh, int p, SignRule rule = SignRule::Alternating);

  int degree() const { return p_; }
  int num_global() const { return n_global_; }
  int num_local() const { return n_local_; }
  SignRule sign_rule() const { return rule_; }

  const std::vector<DofAttributes>& attributes() const { return attributes_; }

  /// Global index (0-based) of local function l (0-based) on element k.
  int global_index(int l, int k) const { return conn_[k * n_local_ + l]; }
  int sign(int l, int k) const { return sign_[k * n_local_ + l]; }
  std::span<const int> element_dofs(int k) const { return {conn_.data() + k * n_local_, static_cast<std::size_t>(n_local_)}; }
  std::span<const int> element_signs(int k) const { return {sign_.data() + k * n_local_, static_cast<std::size_t>(n_local_)}; }

  /// Mesh entity counts the map was built for.
  std::array<int, 3> mesh_counts() const { return counts_; }

private:
  int p_;
  int n_local_;
  int n_global_;
  SignRule rule_;
  std::array<int, 3> counts_;
  std::vector<DofAttributes> attributes_;
  std::vector<int> conn_;
  std::vector<int> sign_;
};

inline DofMap build_dofmap(const Mesh& mesh, int p, SignRule rule = SignRule::Alternating)
{
  return DofMap(mesh, p, rule);
}

/// Zero-pads a coefficient vector from the degree of `from` to the degree of `to`.
/// Throws std::invalid_argument on mesh mismatch, decreasing degree or wrong length.
std::vector<double> embed_coefficients(std::span<const double> coeffs, const DofMap& from,
                                       const DofMap& to);

struct FieldValue {
  double value = 0.0;
  double dx = 0.0;
  double dy = 0.0;
};

/// Evaluates sum_m coeffs[m] N_m^(g) at Q_k(pt) on element k, with the physical gradient.
FieldValue evaluate_field(const Mesh& mesh, const DofMap& dofmap, std::span<const double> coeffs,
                          int k, RefPoint pt);

} // namespace hpfem
