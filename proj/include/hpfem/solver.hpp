#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hpfem/assembly.hpp"
#include "hpfem/dofmap.hpp"
#include "hpfem/mesh.hpp"
#include "hpfem/sparse.hpp"

namespace hpfem {

/// -Laplace(u) + nu u = f in the domain, zero normal derivative on the boundary.
struct BvpProblem {
  double nu = 0.1;
  ScalarField f;
  ScalarField u_exact;      // optional, empty when unknown
  GradientField grad_exact; // optional, required together with u_exact

  bool has_exact() const { return static_cast<bool>(u_exact) && static_cast<bool>(grad_exact); }
};

/// u = (1 - x^2)^2 (1 - y^2)^2 on [-1, 1]^2 with the matching right-hand side.
BvpProblem manufactured_problem(double nu = 0.1);

enum class LinearSolver { Auto, CG, Direct };

struct SolveOptions {
  LinearSolver method = LinearSolver::Auto;
  double tol = 1e-12;          // relative residual
  int max_iter_factor = 20;    // CG iteration cap = factor * n
  int direct_threshold = 20000; // Auto uses the direct solver up to this size
  int quad_order = 0;          // matrices; 0 = p + 1 points per direction
  int load_quad_order = 0;     // right-hand side; 0 = p + 2
};

struct SolveReport {
  LinearSolver used = LinearSolver::Direct;
  int iterations = 0;
  double relative_residual = 0.0;
};

class NoConvergence : public std::runtime_error {
public:
  NoConvergence(double residual, int iterations);
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

private:
  double residual_;
  int iterations_;
};

/// Solves A x = b for symmetric positive definite A; throws NoConvergence.
std::vector<double> solve_spd(const SparseMatrix& a, std::span<const double> b,
                              const SolveOptions& options = {}, SolveReport* report = nullptr);

/// Jacobi-preconditioned conjugate gradients, starting from x.
SolveReport pcg(const SparseMatrix& a, std::span<const double> b, std::span<double> x, double tol,
                int max_iterations);

/// Coefficients of a function in S^p on a mesh. The mesh must outlive the solution.
struct Solution {
  const Mesh* mesh = nullptr;
  std::shared_ptr<const DofMap> dofmap;
  std::vector<double> coeffs;

  int degree() const { return dofmap->degree(); }
  FieldValue evaluate(int element, RefPoint pt) const
  {
    return evaluate_field(*mesh, *dofmap, coeffs, element, pt);
  }
};

/// Galerkin solution of the problem in S^p; throws std::invalid_argument if nu <= 0.
Solution solve_bvp(const Mesh& mesh, int p, const BvpProblem& problem,
                   const SolveOptions& options = {}, SolveReport* report = nullptr);

/// Energy projection of the exact solution into S^p_tilde.
Solution project_exact(const Mesh& mesh, int p_tilde, const BvpProblem& problem,
                       const SolveOptions& options = {});

/// K + M on the solution's mesh and degree.
SparseMatrix energy_matrix(const Mesh& mesh, const DofMap& dofmap, const AssemblyOptions& options = {});

/// sqrt((ref - sol)^T A (ref - sol)) with sol zero-padded to the degree of ref.
double energy_error(const Solution& sol, const Solution& ref, const SparseMatrix& energy);

struct ConvergenceRecord {
  int level = 0;
  int p = 0;
  long long n_p = 0;
  double energy_error = 0.0;
  int iterations = 0;
  double seconds = 0.0;
};

struct StudyOptions {
  int p_tilde = 0;            // 0 = p_max + 2
  const Mesh* base = nullptr; // level L = L uniform refinements of base; null = [-1, 1]^2
  SolveOptions solve;
};

/// For each level (outer) and p = 1..p_max (inner): solve and measure the
/// energy error against the projection into S^p_tilde on the same mesh.
/// Without an exact solution the reference is the Galerkin solution in S^p_tilde.
std::vector<ConvergenceRecord> convergence_study(int level_from, int level_to, int p_max,
                                                 const BvpProblem& problem,
                                                 const StudyOptions& options = {});

struct FieldSample {
  double x, y, value;
};

/// Values on a per-element grid of samples x samples reference points.
std::vector<FieldSample> sample_solution(const Solution& sol, int samples = 30);

} // namespace hpfem
