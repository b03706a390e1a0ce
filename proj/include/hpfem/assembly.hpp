#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "hpfem/dofmap.hpp"
#include "hpfem/mesh.hpp"
#include "hpfem/quadrature.hpp"
#include "hpfem/sparse.hpp"

namespace hpfem {

using ScalarField = std::function<double(double x, double y)>;
using GradientField = std::function<std::array<double, 2>(double x, double y)>;

enum class MatrixKind { Mass, Stiffness };

/// Reference matrices integrated with the given rule (default: intrec_hp(p)).
Eigen::MatrixXd mass_matrix_reference(int p);
Eigen::MatrixXd mass_matrix_reference(int p, const QuadRule& rule);
Eigen::MatrixXd stiffness_matrix_reference(int p);
Eigen::MatrixXd stiffness_matrix_reference(int p, const QuadRule& rule);

/// Local matrices of one element. Mass uses |T|/4 * M_ref on axis-aligned
/// rectangles unless affine_fast_path is false; stiffness always maps gradients
/// through the inverse Jacobian at every quadrature point.
Eigen::MatrixXd local_mass(const ElementCoords& element, int p, const QuadRule& rule,
                           bool affine_fast_path = true);
Eigen::MatrixXd local_stiffness(const ElementCoords& element, int p, const QuadRule& rule);

struct AssemblyOptions {
  /// Gauss points per direction; 0 selects the default for the quantity.
  int quad_order = 0;
  bool affine_fast_path = true;
  /// Reuse local matrices across translated copies of the same element shape.
  bool reuse_congruent = true;
};

struct AssemblyStats {
  int affine_elements = 0;
  int general_elements = 0;
  int local_evaluations = 0;
};

SparseMatrix assemble_global(const Mesh& mesh, const DofMap& dofmap, MatrixKind kind,
                             const AssemblyOptions& options = {}, AssemblyStats* stats = nullptr);

/// b_m = int f N_m^(g); default quadrature uses p + 2 points per direction.
std::vector<double> assemble_load(const Mesh& mesh, const DofMap& dofmap, const ScalarField& f,
                                  int quad_order = 0);

/// r_m = int (grad u . grad N_m^(g) + u N_m^(g)); default quadrature p + 2.
std::vector<double> assemble_energy_rhs(const Mesh& mesh, const DofMap& dofmap,
                                        const ScalarField& u, const GradientField& grad_u,
                                        int quad_order = 0);

} // namespace hpfem
