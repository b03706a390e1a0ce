#include "hpfem/assembly.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace hpfem {

namespace {

ShapeTable table_for(int p, const QuadRule& rule)
{
  return shape2d_eval_all(p, rule.points);
}

// Physical-gradient tables and det-weighted quadrature weights of one element.
struct MappedElement {
  Eigen::VectorXd weights;
  Eigen::MatrixXd grad_x;
  Eigen::MatrixXd grad_y;
};

MappedElement map_element(const ElementCoords& element, const ShapeTable& table,
                          const QuadRule& rule, bool with_gradients)
{
  const int nq = rule.size();
  MappedElement out;
  out.weights.resize(nq);
  if (with_gradients) {
    out.grad_x.resize(table.num_shapes(), nq);
    out.grad_y.resize(table.num_shapes(), nq);
  }
  for (int q = 0; q < nq; ++q) {
    const Jacobian J = iso_jacobian(element, rule.points[q]);
    out.weights(q) = rule.weights[q] * J.det;
    if (with_gradients) {
      const double inv = 1.0 / J.det;
      out.grad_x.col(q) = inv * (J.dy_deta * table.d_xi.col(q) - J.dy_dxi * table.d_eta.col(q));
      out.grad_y.col(q) = inv * (-J.dx_deta * table.d_xi.col(q) + J.dx_dxi * table.d_eta.col(q));
    }
  }
  return out;
}

Eigen::MatrixXd mass_from_table(const ElementCoords& element, const ShapeTable& table,
                                const QuadRule& rule)
{
  const MappedElement m = map_element(element, table, rule, false);
  return table.value * m.weights.asDiagonal() * table.value.transpose();
}

Eigen::MatrixXd stiffness_from_table(const ElementCoords& element, const ShapeTable& table,
                                     const QuadRule& rule)
{
  const MappedElement m = map_element(element, table, rule, true);
  return m.grad_x * m.weights.asDiagonal() * m.grad_x.transpose() +
         m.grad_y * m.weights.asDiagonal() * m.grad_y.transpose();
}

constexpr ElementCoords kReferenceSquare{{{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}};

// Local matrices keyed by element shape modulo translation.
class CongruenceCache {
public:
  static constexpr std::size_t kCapacity = 16;

  const Eigen::MatrixXd* find(const ElementCoords& el) const
  {
    const auto key = make_key(el);
    for (const auto& [k, m] : entries_)
      if (matches(k, key))
        return &m;
    return nullptr;
  }

  void insert(const ElementCoords& el, Eigen::MatrixXd m)
  {
    if (entries_.size() < kCapacity)
      entries_.emplace_back(make_key(el), std::move(m));
  }

private:
  using Key = std::array<double, 6>;

  static Key make_key(const ElementCoords& el)
  {
    Key k{};
    for (int i = 1; i < 4; ++i) {
      k[2 * (i - 1)] = el[i].x - el[0].x;
      k[2 * (i - 1) + 1] = el[i].y - el[0].y;
    }
    return k;
  }

  static bool matches(const Key& a, const Key& b)
  {
    double scale = 0.0;
    for (double v : a)
      scale = std::max(scale, std::abs(v));
    for (int i = 0; i < 6; ++i)
      if (std::abs(a[i] - b[i]) > 1e-12 * scale)
        return false;
    return true;
  }

  std::vector<std::pair<Key, Eigen::MatrixXd>> entries_;
};

} // namespace

Eigen::MatrixXd mass_matrix_reference(int p, const QuadRule& rule)
{
  check_degree(p);
  return mass_from_table(kReferenceSquare, table_for(p, rule), rule);
}

Eigen::MatrixXd mass_matrix_reference(int p) { return mass_matrix_reference(p, intrec_hp(p)); }

Eigen::MatrixXd stiffness_matrix_reference(int p, const QuadRule& rule)
{
  check_degree(p);
  return stiffness_from_table(kReferenceSquare, table_for(p, rule), rule);
}

Eigen::MatrixXd stiffness_matrix_reference(int p)
{
  return stiffness_matrix_reference(p, intrec_hp(p));
}

Eigen::MatrixXd local_mass(const ElementCoords& element, int p, const QuadRule& rule,
                           bool affine_fast_path)
{
  check_degree(p);
  if (affine_fast_path && is_axis_aligned_rectangle(element)) {
    const double area = (element[1].x - element[0].x) * (element[3].y - element[0].y);
    return (area / 4.0) * mass_matrix_reference(p, rule);
  }
  return mass_from_table(element, table_for(p, rule), rule);
}

Eigen::MatrixXd local_stiffness(const ElementCoords& element, int p, const QuadRule& rule)
{
  check_degree(p);
  return stiffness_from_table(element, table_for(p, rule), rule);
}

SparseMatrix assemble_global(const Mesh& mesh, const DofMap& dofmap, MatrixKind kind,
                             const AssemblyOptions& options, AssemblyStats* stats)
{
  if (dofmap.mesh_counts() != std::array{mesh.num_nodes(), mesh.num_edges(), mesh.num_elements()})
    throw std::invalid_argument("assemble_global: degree map was built for another mesh");
  const int p = dofmap.degree();
  const QuadRule rule = tensor_gauss_rule(options.quad_order > 0 ? options.quad_order : p + 1);
  const ShapeTable table = table_for(p, rule);
  const int n = dofmap.num_local();

  std::optional<Eigen::MatrixXd> mass_ref;
  CongruenceCache cache;
  AssemblyStats local_stats;

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_elements()) * n * (n + 1) / 2);
  Eigen::MatrixXd computed;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const ElementCoords el = mesh.element_coords(k);
    const bool affine = is_axis_aligned_rectangle(el);
    if (affine)
      ++local_stats.affine_elements;
    else
      ++local_stats.general_elements;

    const Eigen::MatrixXd* local = options.reuse_congruent ? cache.find(el) : nullptr;
    if (local == nullptr) {
      ++local_stats.local_evaluations;
      if (kind == MatrixKind::Mass) {
        if (affine && options.affine_fast_path) {
          if (!mass_ref)
            mass_ref = mass_from_table(kReferenceSquare, table, rule);
          computed = (mesh.element_area(k) / 4.0) * *mass_ref;
        } else {
          computed = mass_from_table(el, table, rule);
        }
      } else {
        computed = stiffness_from_table(el, table, rule);
      }
      if (options.reuse_congruent) {
        cache.insert(el, computed);
        local = cache.find(el);
      }
      if (local == nullptr)
        local = &computed;
    }

    const auto dofs = dofmap.element_dofs(k);
    const auto signs = dofmap.element_signs(k);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (dofs[i] <= dofs[j])
          triplets.push_back({dofs[i], dofs[j], signs[i] * signs[j] * (*local)(i, j)});
  }
  if (stats)
    *stats = local_stats;
  return SparseMatrix::from_upper(dofmap.num_global(), triplets);
}

namespace {

template <typename Integrand>
std::vector<double> assemble_vector(const Mesh& mesh, const DofMap& dofmap, int quad_order,
                                    Integrand&& integrand)
{
  const int p = dofmap.degree();
  const QuadRule rule = tensor_gauss_rule(quad_order > 0 ? quad_order : p + 2);
  const ShapeTable table = table_for(p, rule);
  const bool need_grad = integrand.needs_gradients;
  std::vector<double> b(dofmap.num_global(), 0.0);
  Eigen::VectorXd local(dofmap.num_local());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const ElementCoords el = mesh.element_coords(k);
    const MappedElement m = map_element(el, table, rule, need_grad);
    local.setZero();
    for (int q = 0; q < rule.size(); ++q) {
      const Point2 x = iso_map(el, rule.points[q]);
      integrand(local, table, m, q, x);
    }
    const auto dofs = dofmap.element_dofs(k);
    const auto signs = dofmap.element_signs(k);
    for (int l = 0; l < dofmap.num_local(); ++l)
      b[dofs[l]] += signs[l] * local(l);
  }
  return b;
}

} // namespace

std::vector<double> assemble_load(const Mesh& mesh, const DofMap& dofmap, const ScalarField& f,
                                  int quad_order)
{
  struct {
    const ScalarField& f;
    bool needs_gradients = false;
    void operator()(Eigen::VectorXd& local, const ShapeTable& t, const MappedElement& m, int q,
                    Point2 x) const
    {
      local += (m.weights(q) * f(x.x, x.y)) * t.value.col(q);
    }
  } integrand{f};
  return assemble_vector(mesh, dofmap, quad_order, integrand);
}

std::vector<double> assemble_energy_rhs(const Mesh& mesh, const DofMap& dofmap,
                                        const ScalarField& u, const GradientField& grad_u,
                                        int quad_order)
{
  struct {
    const ScalarField& u;
    const GradientField& grad_u;
    bool needs_gradients = true;
    void operator()(Eigen::VectorXd& local, const ShapeTable& t, const MappedElement& m, int q,
                    Point2 x) const
    {
      const auto g = grad_u(x.x, x.y);
      const double w = m.weights(q);
      local += (w * u(x.x, x.y)) * t.value.col(q) + (w * g[0]) * m.grad_x.col(q) +
               (w * g[1]) * m.grad_y.col(q);
    }
  } integrand{u, grad_u};
  return assemble_vector(mesh, dofmap, quad_order, integrand);
}

} // namespace hpfem
