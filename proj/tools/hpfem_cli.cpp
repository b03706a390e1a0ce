#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hpfem/basis1d.hpp"
#include "hpfem/expression.hpp"
#include "hpfem/solver.hpp"

using namespace hpfem;
namespace fs = std::filesystem;

namespace {

struct Globals {
  fs::path out = ".";
  int quad_order = 0;
  unsigned seed = 0;
  std::string format = "csv";
  std::string mesh_file;
  std::string save_mesh;
};

struct MeshSpec {
  int level = 2;
  std::vector<double> domain;
  int nx = 0, ny = 0;
};

std::ofstream open_out(const Globals& g, const std::string& name)
{
  fs::create_directories(g.out);
  std::ofstream os(g.out / name);
  if (!os)
    throw std::runtime_error("cannot write " + (g.out / name).string());
  os << std::setprecision(15);
  return os;
}

Mesh make_mesh(const Globals& g, const MeshSpec& spec)
{
  Mesh m = [&] {
    if (!g.mesh_file.empty())
      return read_mesh(g.mesh_file);
    if (!spec.domain.empty())
      return rectangulate(Rect{spec.domain[0], spec.domain[1], spec.domain[2], spec.domain[3]},
                          spec.nx, spec.ny);
    return uniform_square_mesh(spec.level);
  }();
  if (!g.save_mesh.empty())
    write_mesh(m, g.save_mesh);
  return m;
}

void add_mesh_options(CLI::App* cmd, MeshSpec& spec)
{
  cmd->add_option("--level", spec.level, "uniform level on [-1,1]^2")->check(CLI::Range(0, 12));
  cmd->add_option("--domain", spec.domain, "x0 x1 y0 y1 of a rectangle")->expected(4);
  cmd->add_option("--nx", spec.nx, "elements in x for --domain");
  cmd->add_option("--ny", spec.ny, "elements in y for --domain");
}

const char* kind_name(ShapeKind k)
{
  switch (k) {
  case ShapeKind::Nodal: return "nodal";
  case ShapeKind::Edge: return "edge";
  default: return "bubble";
  }
}

void write_matrix(const Globals& g, const SparseMatrix& a, const std::string& stem)
{
  if (g.format == "mm") {
    fs::create_directories(g.out);
    write_matrix_market(a, g.out / (stem + ".mtx"));
    return;
  }
  auto os = open_out(g, stem + ".csv");
  os << std::setprecision(17) << "row,col,value\n";
  for (int i = 0; i < a.rows(); ++i)
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
      os << i + 1 << ',' << a.col_index()[p] + 1 << ',' << a.values()[p] << '\n';
}

std::string dash(int v) { return v ? std::to_string(v) : "-"; }

void write_b(const Globals& g, const DofMap& d, const std::string& name)
{
  auto os = open_out(g, name);
  os << "dof,degree,node,edge,element,bubble\n";
  int i = 1;
  for (const DofAttributes& a : d.attributes())
    os << i++ << ',' << a.degree << ',' << dash(a.node) << ',' << dash(a.edge) << ','
       << dash(a.element) << ',' << dash(a.bubble) << '\n';
}

void write_cs(const Globals& g, const DofMap& d, const Mesh& m, const std::string& prefix)
{
  auto c = open_out(g, prefix + "_C.csv");
  auto s = open_out(g, prefix + "_S.csv");
  c << "local";
  s << "local";
  for (int k = 0; k < m.num_elements(); ++k) {
    c << ",T" << k + 1;
    s << ",T" << k + 1;
  }
  c << '\n';
  s << '\n';
  for (int l = 0; l < d.num_local(); ++l) {
    c << l + 1;
    s << l + 1;
    for (int k = 0; k < m.num_elements(); ++k) {
      c << ',' << d.global_index(l, k) + 1;
      s << ',' << d.sign(l, k);
    }
    c << '\n';
    s << '\n';
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_basis1d(const Globals& g, int p_max)
{
  auto os = open_out(g, "basis1d.csv");
  os << "xi";
  for (int m = 1; m <= p_max + 1; ++m)
    os << ",N" << m;
  os << '\n';
  for (int i = 0; i <= 400; ++i) {
    const double xi = -1.0 + i / 200.0;
    os << xi;
    for (int m = 1; m <= p_max + 1; ++m)
      os << ',' << shape1d_eval(m, xi);
    os << '\n';
  }
  std::cout << "basis1d: " << p_max + 1 << " series x 401 points\n";
  return 0;
}

int cmd_basis2d(const Globals& g, const std::vector<int>& ms)
{
  auto index = open_out(g, "basis2d_index.csv");
  index << "m,s,p,kind,entity\n";
  for (int m : ms) {
    const LocalShapeId id = shapeindx(m);
    index << m << ',' << id.s << ',' << id.p << ',' << kind_name(id.kind) << ',' << id.entity_slot << '\n';
    std::cout << "m=" << m << " s=" << id.s << " p=" << id.p << " " << kind_name(id.kind) << '\n';
    auto os = open_out(g, "basis2d_m" + std::to_string(m) + ".csv");
    os << "xi,eta,N" << m << '\n';
    for (int j = 0; j <= 50; ++j)
      for (int i = 0; i <= 50; ++i) {
        const RefPoint pt{-1.0 + i / 25.0, -1.0 + j / 25.0};
        os << pt.xi << ',' << pt.eta << ',' << shape2d_eval(m, pt).value << '\n';
      }
  }
  return 0;
}

int cmd_iso(const Globals& g)
{
  const int p = 4;
  const double w = 0.75 * std::numbers::pi;
  auto f = [w](double xi, double eta) { return std::cos(w * xi) * std::cos(w * eta); };
  const QuadRule rule = tensor_gauss_rule(g.quad_order > 0 ? g.quad_order : p + 4);
  const ShapeTable t = shape2d_eval_all(p, rule.points);
  const int n = dim_trunk_space(p);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd v = t.value.col(q);
    mass += rule.weights[q] * v * v.transpose();
    rhs += rule.weights[q] * f(rule.points[q].xi, rule.points[q].eta) * v;
  }
  const Eigen::VectorXd c = mass.llt().solve(rhs);

  auto coeffs = open_out(g, "iso_coefficients.csv");
  coeffs << "m,coefficient\n";
  for (int i = 0; i < n; ++i)
    coeffs << i + 1 << ',' << c(i) << '\n';

  const ElementCoords quad{{{4.5, 1.5}, {8.0, -0.5}, {7.0, 2.5}, {6.0, 4.0}}};
  auto ref = open_out(g, "iso_reference.csv");
  auto mapped = open_out(g, "iso_mapped.csv");
  ref << "xi,eta,value,exact\n";
  mapped << "x,y,value\n";
  double max_err = 0.0;
  for (int j = 0; j <= 40; ++j)
    for (int i = 0; i <= 40; ++i) {
      const RefPoint pt{-1.0 + i / 20.0, -1.0 + j / 20.0};
      double u = 0.0;
      for (int m = 1; m <= n; ++m)
        u += c(m - 1) * shape2d_eval(m, pt).value;
      max_err = std::max(max_err, std::abs(u - f(pt.xi, pt.eta)));
      ref << pt.xi << ',' << pt.eta << ',' << u << ',' << f(pt.xi, pt.eta) << '\n';
      const Point2 x = iso_map(quad, pt);
      mapped << x.x << ',' << x.y << ',' << u << '\n';
    }
  std::cout << "iso: " << n << " coefficients, max error on reference square " << max_err << '\n';
  return 0;
}

int cmd_global_demo(const Globals& g, int samples)
{
  const Mesh m = rectangulate(Rect{-3, 3, 0, 2}, 7, 2);
  const DofMap d(m, 4);
  std::vector<double> u(d.num_global(), 0.0);
  u[9] = 1.0;
  u[33] = -2.0;
  u[141] = -2.0;
  const Solution sol{&m, std::make_shared<const DofMap>(d), u};
  auto os = open_out(g, "global_demo.csv");
  os << "x,y,value\n";
  for (const FieldSample& s : sample_solution(sol, samples))
    os << s.x << ',' << s.y << ',' << s.value << '\n';
  std::cout << "global-demo: n_p = " << d.num_global() << '\n';
  return 0;
}

int cmd_dofmap(const Globals& g, const MeshSpec& spec, int p)
{
  const Mesh m = make_mesh(g, spec);
  const DofMap d(m, p);
  write_b(g, d, "dofmap_B.csv");
  write_cs(g, d, m, "dofmap");
  std::cout << "dofmap: |N|=" << m.num_nodes() << " |E|=" << m.num_edges() << " |T|=" << m.num_elements()
            << " n_p=" << d.num_global() << '\n';
  return 0;
}

int cmd_assemble(const Globals& g, const MeshSpec& spec, int p)
{
  const Mesh m = make_mesh(g, spec);
  const DofMap d(m, p);
  AssemblyOptions opt;
  opt.quad_order = g.quad_order;
  auto timing = open_out(g, "assembly_times.csv");
  timing << "matrix,n_p,nonzeros,seconds\n";
  for (auto [kind, name] : {std::pair{MatrixKind::Mass, "M"}, std::pair{MatrixKind::Stiffness, "K"}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const SparseMatrix a = assemble_global(m, d, kind, opt);
    const double sec = seconds_since(t0);
    write_matrix(g, a, name);
    timing << name << ',' << a.rows() << ',' << a.nonzeros() << ',' << sec << '\n';
    std::cout << name << ": n=" << a.rows() << " nnz=" << a.nonzeros() << " " << sec << " s\n";
  }
  return 0;
}

struct SolveArgs {
  std::string levels = "1..5";
  int p_max = 5;
  double nu = 0.1;
  std::string solver = "auto";
  double tol = 1e-12;
  int samples = 0;
  std::string f, u;
};

std::pair<int, int> parse_range(const std::string& s)
{
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--levels", "expected a..b, got " + s);
  }
}

BvpProblem user_problem(const SolveArgs& a)
{
  if (a.f.empty() && a.u.empty())
    return manufactured_problem(a.nu);
  BvpProblem pb;
  pb.nu = a.nu;
  if (!a.u.empty()) {
    const Expression u = Expression::parse(a.u);
    const Expression ux = u.derivative('x'), uy = u.derivative('y');
    pb.u_exact = [u](double x, double y) { return u(x, y); };
    pb.grad_exact = [ux, uy](double x, double y) { return std::array<double, 2>{ux(x, y), uy(x, y)}; };
  }
  if (!a.f.empty()) {
    const Expression f = Expression::parse(a.f);
    pb.f = [f](double x, double y) { return f(x, y); };
  } else {
    // f = -Laplace(u) + nu u
    const Expression u = Expression::parse(a.u);
    const Expression uxx = u.derivative('x').derivative('x'), uyy = u.derivative('y').derivative('y');
    const double nu = a.nu;
    pb.f = [u, uxx, uyy, nu](double x, double y) { return -uxx(x, y) - uyy(x, y) + nu * u(x, y); };
  }
  return pb;
}

int cmd_solve(const Globals& g, const SolveArgs& a)
{
  const auto [from, to] = parse_range(a.levels);
  const BvpProblem pb = user_problem(a);
  StudyOptions opt;
  opt.solve.method = a.solver == "cg" ? LinearSolver::CG : a.solver == "direct" ? LinearSolver::Direct
                                                                                : LinearSolver::Auto;
  opt.solve.tol = a.tol;
  opt.solve.quad_order = g.quad_order;
  std::optional<Mesh> base;
  if (!g.mesh_file.empty()) {
    base = read_mesh(g.mesh_file);
    opt.base = &*base;
  }
  if (!g.save_mesh.empty())
    write_mesh(base ? *base : uniform_square_mesh(from), g.save_mesh);

  const auto rows = convergence_study(from, to, a.p_max, pb, opt);
  auto os = open_out(g, "convergence.csv");
  os << "level,p,n_p,energy_error,iterations,seconds\n";
  for (const ConvergenceRecord& r : rows) {
    os << r.level << ',' << r.p << ',' << r.n_p << ',' << r.energy_error << ',' << r.iterations << ','
       << r.seconds << '\n';
    std::cout << "level " << r.level << " p " << r.p << " n_p " << r.n_p << " error " << r.energy_error
              << '\n';
  }
  if (a.samples > 0) {
    for (int level = from; level <= to; ++level) {
      Mesh mesh = base ? *base : uniform_square_mesh(level);
      if (base)
        for (int r = 0; r < level; ++r)
          mesh = refine_uniform(mesh);
      const Solution sol = solve_bvp(mesh, a.p_max, pb, opt.solve);
      auto fs = open_out(g, "solution_L" + std::to_string(level) + "_p" + std::to_string(a.p_max) + ".csv");
      fs << "x,y,value\n";
      for (const FieldSample& s : sample_solution(sol, a.samples))
        fs << s.x << ',' << s.y << ',' << s.value << '\n';
    }
  }
  return 0;
}

int cmd_tables(const Globals& g, int time_level)
{
  const Mesh one = uniform_square_mesh(0);
  write_b(g, DofMap(one, 5), "table3_B.csv");
  const Mesh two = rectangulate(Rect{0, 2, 0, 1}, 2, 1);
  write_cs(g, DofMap(two, 3), two, "table4");

  auto t5 = open_out(g, "table5_counts.csv");
  t5 << "level,n_1,n_2,n_3,n_4,n_5,nodes,edges,elements\n";
  for (int level = 2; level <= 9; ++level) {
    const long long n = 1LL << level;
    const long long nodes = (n + 1) * (n + 1), edges = 2 * n * (n + 1), elems = n * n;
    t5 << level;
    for (int p = 1; p <= 5; ++p)
      t5 << ',' << global_dim(nodes, edges, elems, p);
    t5 << ',' << nodes << ',' << edges << ',' << elems << '\n';
  }

  AssemblyOptions opt;
  opt.quad_order = g.quad_order;
  auto t6 = open_out(g, "table6_times.csv");
  t6 << "level,p,n_p,mass_seconds,stiffness_seconds\n";
  for (int level = 2; level <= time_level; ++level) {
    const Mesh m = uniform_square_mesh(level);
    for (int p = 1; p <= 5; ++p) {
      const DofMap d(m, p);
      auto t0 = std::chrono::steady_clock::now();
      assemble_global(m, d, MatrixKind::Mass, opt);
      const double tm = seconds_since(t0);
      t0 = std::chrono::steady_clock::now();
      assemble_global(m, d, MatrixKind::Stiffness, opt);
      t6 << level << ',' << p << ',' << d.num_global() << ',' << tm << ',' << seconds_since(t0) << '\n';
    }
  }
  std::cout << "tables written to " << g.out.string() << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"hp-FEM on quadrilateral meshes with hierarchic Legendre shape functions"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out, "output directory");
  app.add_option("--quad-order", g.quad_order, "Gauss points per direction (0 = default)")
      ->check(CLI::Range(0, 64));
  app.add_option("--seed", g.seed, "seed for randomized sampling");
  app.add_option("--format", g.format, "matrix output format")->check(CLI::IsMember({"csv", "mm"}));
  app.add_option("--mesh", g.mesh_file, "read the mesh from a JSON file")->check(CLI::ExistingFile);
  app.add_option("--save-mesh", g.save_mesh, "write the mesh used to a JSON file");

  int p_max = 5;
  auto* basis1d = app.add_subcommand("basis1d", "sample 1D shape functions N_1..N_{pmax+1}");
  basis1d->add_option("--pmax", p_max)->check(CLI::Range(1, kMaxDegree));

  std::vector<int> ms{2, 17};
  auto* basis2d = app.add_subcommand("basis2d", "sample 2D shape functions on a 51x51 grid");
  basis2d->add_option("-m,--m", ms, "local indices")->check(CLI::Range(1, dim_trunk_space(kMaxDegree)));

  auto* iso = app.add_subcommand("iso", "degree-4 projection mapped to a quadrilateral");

  int samples = 20;
  auto* demo = app.add_subcommand("global-demo", "combination of global shape functions on a 7x2 mesh");
  demo->add_option("--samples", samples)->check(CLI::Range(2, 200));

  MeshSpec spec;
  int p = 3;
  auto* dofmap = app.add_subcommand("dofmap", "B, C and S tables for a mesh");
  add_mesh_options(dofmap, spec);
  dofmap->add_option("-p,--p", p)->check(CLI::Range(1, kMaxDegree));

  auto* assemble = app.add_subcommand("assemble", "assemble M and K with timings");
  add_mesh_options(assemble, spec);
  assemble->add_option("-p,--p", p)->check(CLI::Range(1, kMaxDegree));

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "convergence study of -Laplace(u) + nu u = f");
  solve->add_option("--levels", sa.levels, "level range a..b");
  solve->add_option("--pmax", sa.p_max)->check(CLI::Range(1, kMaxDegree - 2));
  solve->add_option("--nu", sa.nu)->check(CLI::PositiveNumber);
  solve->add_option("--solver", sa.solver)->check(CLI::IsMember({"auto", "cg", "direct"}));
  solve->add_option("--tol", sa.tol)->check(CLI::PositiveNumber);
  solve->add_option("--samples", sa.samples, "per-element sample grid of the p = pmax solutions");
  solve->add_option("--f", sa.f, "right-hand side expression in x, y");
  solve->add_option("--u", sa.u, "exact solution expression in x, y");

  int time_level = 6;
  auto* tables = app.add_subcommand("tables", "dof attribute, connectivity, count and timing tables");
  tables->add_option("--time-level", time_level, "finest level for assembly timings")->check(CLI::Range(2, 9));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*basis1d)
      return cmd_basis1d(g, p_max);
    if (*basis2d)
      return cmd_basis2d(g, ms);
    if (*iso)
      return cmd_iso(g);
    if (*demo)
      return cmd_global_demo(g, samples);
    if (*dofmap)
      return cmd_dofmap(g, spec, p);
    if (*assemble)
      return cmd_assemble(g, spec, p);
    if (*solve)
      return cmd_solve(g, sa);
    if (*tables)
      return cmd_tables(g, time_level);
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
