#include "hpfem/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/SparseCholesky>

namespace hpfem {

NoConvergence::NoConvergence(double residual, int iterations)
    : std::runtime_error("linear solver did not converge: relative residual " +
                         std::to_string(residual) + " after " + std::to_string(iterations) +
                         " iterations"),
      residual_(residual), iterations_(iterations)
{
}

BvpProblem manufactured_problem(double nu)
{
  BvpProblem prob;
  prob.nu = nu;
  prob.u_exact = [](double x, double y) {
    const double a = 1 - x * x, b = 1 - y * y;
    return a * a * b * b;
  };
  prob.grad_exact = [](double x, double y) -> std::array<double, 2> {
    const double a = 1 - x * x, b = 1 - y * y;
    return {-4 * x * a * b * b, -4 * y * b * a * a};
  };
  prob.f = [nu, u = prob.u_exact](double x, double y) {
    const double x2 = x * x, y2 = y * y;
    return nu * u(x, y) -
           4 * (-2 + 5 * y2 - y2 * y2 + x2 * x2 * (-1 + 3 * y2) + x2 * (5 - 12 * y2 + 3 * y2 * y2));
  };
  return prob;
}

namespace {

double norm2(std::span<const double> v)
{
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double relative_residual(const SparseMatrix& a, std::span<const double> b, std::span<const double> x)
{
  std::vector<double> r = a.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = b[i] - r[i];
  const double bn = norm2(b);
  return bn > 0.0 ? norm2(r) / bn : norm2(r);
}

} // namespace

SolveReport pcg(const SparseMatrix& a, std::span<const double> b, std::span<double> x, double tol,
                int max_iterations)
{
  const int n = a.rows();
  std::vector<double> inv_diag = a.diagonal();
  for (double& d : inv_diag)
    d = d != 0.0 ? 1.0 / d : 1.0;

  std::vector<double> r(n), z(n), p(n), ap(n);
  a.multiply(x, r);
  for (int i = 0; i < n; ++i)
    r[i] = b[i] - r[i];
  const double bnorm = norm2(b) > 0.0 ? norm2(b) : 1.0;

  SolveReport report{LinearSolver::CG, 0, norm2(r) / bnorm};
  if (report.relative_residual <= tol)
    return report;

  for (int i = 0; i < n; ++i)
    z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
  double best = report.relative_residual;
  int best_at = 0;
  // no new minimum for this many iterations counts as stagnation
  const int patience = std::max(1000, n / 2);

  for (int it = 1; it <= max_iterations; ++it) {
    a.multiply(p, ap);
    const double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
    if (!(pap > 0.0))
      throw NoConvergence(report.relative_residual, it);
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    report.iterations = it;
    report.relative_residual = norm2(r) / bnorm;
    if (!std::isfinite(report.relative_residual))
      throw NoConvergence(report.relative_residual, it);
    if (report.relative_residual <= tol)
      return report;
    if (report.relative_residual < best) {
      best = report.relative_residual;
      best_at = it;
    } else if (it - best_at > patience) {
      throw NoConvergence(report.relative_residual, it);
    }
    for (int i = 0; i < n; ++i)
      z[i] = inv_diag[i] * r[i];
    const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
  }
  throw NoConvergence(report.relative_residual, report.iterations);
}

std::vector<double> solve_spd(const SparseMatrix& a, std::span<const double> b,
                              const SolveOptions& options, SolveReport* report)
{
  const int n = a.rows();
  if (b.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("solve_spd: right-hand side length mismatch");
  LinearSolver method = options.method;
  if (method == LinearSolver::Auto)
    method = n <= options.direct_threshold ? LinearSolver::Direct : LinearSolver::CG;

  std::vector<double> x(n, 0.0);
  SolveReport rep;
  if (method == LinearSolver::CG) {
    rep = pcg(a, b, x, options.tol, options.max_iter_factor * std::max(n, 1));
  } else {
    const Eigen::SparseMatrix<double> m = a.to_eigen();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(m);
    if (ldlt.info() != Eigen::Success)
      throw NoConvergence(std::numeric_limits<double>::infinity(), 0);
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
    Eigen::VectorXd sol = ldlt.solve(rhs);
    rep.used = LinearSolver::Direct;
    // a few steps of iterative refinement if the factorisation left residue
    for (int step = 0; step < 3; ++step) {
      const Eigen::VectorXd r = rhs - m * sol;
      const double bn = rhs.norm() > 0.0 ? rhs.norm() : 1.0;
      rep.relative_residual = r.norm() / bn;
      if (rep.relative_residual <= options.tol)
        break;
      sol += ldlt.solve(r);
      ++rep.iterations;
    }
    Eigen::VectorXd::Map(x.data(), n) = sol;
    rep.relative_residual = relative_residual(a, b, x);
    if (!(rep.relative_residual <= options.tol))
      throw NoConvergence(rep.relative_residual, rep.iterations);
  }
  if (report)
    *report = rep;
  return x;
}

namespace {

AssemblyOptions assembly_options(const SolveOptions& o)
{
  AssemblyOptions a;
  a.quad_order = o.quad_order;
  return a;
}

} // namespace

SparseMatrix energy_matrix(const Mesh& mesh, const DofMap& dofmap, const AssemblyOptions& options)
{
  const SparseMatrix k = assemble_global(mesh, dofmap, MatrixKind::Stiffness, options);
  const SparseMatrix m = assemble_global(mesh, dofmap, MatrixKind::Mass, options);
  return SparseMatrix::linear_combination(1.0, k, 1.0, m);
}

Solution solve_bvp(const Mesh& mesh, int p, const BvpProblem& problem, const SolveOptions& options,
                   SolveReport* report)
{
  if (!(problem.nu > 0.0))
    throw std::invalid_argument("solve_bvp: reaction coefficient nu must be positive");
  if (!problem.f)
    throw std::invalid_argument("solve_bvp: right-hand side is missing");
  auto dofmap = std::make_shared<const DofMap>(mesh, p);
  const AssemblyOptions ao = assembly_options(options);
  const SparseMatrix k = assemble_global(mesh, *dofmap, MatrixKind::Stiffness, ao);
  const SparseMatrix m = assemble_global(mesh, *dofmap, MatrixKind::Mass, ao);
  const SparseMatrix a = SparseMatrix::linear_combination(1.0, k, problem.nu, m);
  const std::vector<double> b = assemble_load(mesh, *dofmap, problem.f, options.load_quad_order);
  Solution sol{&mesh, dofmap, solve_spd(a, b, options, report)};
  return sol;
}

Solution project_exact(const Mesh& mesh, int p_tilde, const BvpProblem& problem,
                       const SolveOptions& options)
{
  if (!problem.has_exact())
    throw std::invalid_argument("project_exact: exact solution and gradient required");
  auto dofmap = std::make_shared<const DofMap>(mesh, p_tilde);
  const SparseMatrix a = energy_matrix(mesh, *dofmap, assembly_options(options));
  const int order = options.load_quad_order > 0 ? options.load_quad_order : p_tilde + 2;
  const std::vector<double> r =
      assemble_energy_rhs(mesh, *dofmap, problem.u_exact, problem.grad_exact, order);
  return Solution{&mesh, dofmap, solve_spd(a, r, options)};
}

double energy_error(const Solution& sol, const Solution& ref, const SparseMatrix& energy)
{
  if (sol.mesh != ref.mesh)
    throw std::invalid_argument("energy_error: solutions live on different meshes");
  if (energy.rows() != ref.dofmap->num_global())
    throw std::invalid_argument("energy_error: matrix dimension does not match reference");
  std::vector<double> d = embed_coefficients(sol.coeffs, *sol.dofmap, *ref.dofmap);
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = ref.coeffs[i] - d[i];
  const std::vector<double> ad = energy.multiply(d);
  const double q = std::inner_product(d.begin(), d.end(), ad.begin(), 0.0);
  return std::sqrt(std::max(q, 0.0));
}

std::vector<ConvergenceRecord> convergence_study(int level_from, int level_to, int p_max,
                                                 const BvpProblem& problem,
                                                 const StudyOptions& options)
{
  if (p_max < 1)
    throw std::invalid_argument("convergence_study: p_max must be >= 1");
  if (level_from < 0 || level_to < level_from)
    throw std::invalid_argument("convergence_study: empty level range");
  const int p_tilde = options.p_tilde > 0 ? options.p_tilde : p_max + 2;
  if (p_tilde < p_max)
    throw std::invalid_argument("convergence_study: reference degree below p_max");

  using clock = std::chrono::steady_clock;
  std::vector<ConvergenceRecord> records;
  for (int level = level_from; level <= level_to; ++level) {
    Mesh mesh = options.base ? *options.base : uniform_square_mesh(level);
    if (options.base)
      for (int r = 0; r < level; ++r)
        mesh = refine_uniform(mesh);
    const Solution ref = problem.has_exact() ? project_exact(mesh, p_tilde, problem, options.solve)
                                             : solve_bvp(mesh, p_tilde, problem, options.solve);
    const SparseMatrix energy =
        energy_matrix(mesh, *ref.dofmap, assembly_options(options.solve));
    for (int p = 1; p <= p_max; ++p) {
      const auto start = clock::now();
      SolveReport rep;
      const Solution sol = solve_bvp(mesh, p, problem, options.solve, &rep);
      const double seconds = std::chrono::duration<double>(clock::now() - start).count();
      records.push_back({level, p, global_dim(mesh, p), energy_error(sol, ref, energy),
                         rep.iterations, seconds});
    }
  }
  return records;
}

std::vector<FieldSample> sample_solution(const Solution& sol, int samples)
{
  if (samples < 2)
    throw std::invalid_argument("sample_solution: need at least 2 samples per direction");
  std::vector<RefPoint> pts;
  for (int j = 0; j < samples; ++j)
    for (int i = 0; i < samples; ++i)
      pts.push_back({-1.0 + 2.0 * i / (samples - 1), -1.0 + 2.0 * j / (samples - 1)});
  const ShapeTable t = shape2d_eval_all(sol.degree(), pts);
  std::vector<FieldSample> out;
  out.reserve(pts.size() * sol.mesh->num_elements());
  Eigen::VectorXd c(sol.dofmap->num_local());
  for (int k = 0; k < sol.mesh->num_elements(); ++k) {
    const auto dofs = sol.dofmap->element_dofs(k);
    const auto signs = sol.dofmap->element_signs(k);
    for (int l = 0; l < c.size(); ++l)
      c(l) = signs[l] * sol.coeffs[dofs[l]];
    const Eigen::VectorXd v = t.value.transpose() * c;
    const ElementCoords el = sol.mesh->element_coords(k);
    for (std::size_t q = 0; q < pts.size(); ++q) {
      const Point2 x = iso_map(el, pts[q]);
      out.push_back({x.x, x.y, v(static_cast<Eigen::Index>(q))});
    }
  }
  return out;
}

} // namespace hpfem
