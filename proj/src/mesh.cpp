#include "hpfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include <json.hpp>

namespace hpfem {

NonPositiveJacobian::NonPositiveJacobian(double det, RefPoint at)
    : std::runtime_error("non-positive Jacobian determinant " + std::to_string(det) +
                         " at reference point (" + std::to_string(at.xi) + ", " +
                         std::to_string(at.eta) + ")"),
      det_(det)
{
}

namespace {

double signed_area(const ElementCoords& c)
{
  double a = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point2& p = c[i];
    const Point2& q = c[(i + 1) % 4];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

} // namespace

Mesh::Mesh(std::vector<Point2> nodes, std::vector<Element> elements)
    : nodes_(std::move(nodes)), elements_(std::move(elements))
{
  if (elements_.empty())
    throw MeshError("mesh has no elements");
  const int nn = num_nodes();
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    for (int v : elements_[k])
      if (v < 0 || v >= nn)
        throw MeshError("element " + std::to_string(k + 1) + " references a missing node");
    if (!(signed_area(element_coords(static_cast<int>(k))) > 0.0))
      throw MeshError("element " + std::to_string(k + 1) + " is not counterclockwise");
  }

  // Sorted node pairs of every local edge; unique rows give the global edges.
  const int ne_local = 4 * num_elements();
  std::vector<Edge> local(ne_local);
  for (int k = 0; k < num_elements(); ++k)
    for (int j = 0; j < 4; ++j) {
      const int a = elements_[k][j], b = elements_[k][(j + 1) % 4];
      local[4 * k + j] = {std::min(a, b), std::max(a, b)};
    }
  edges_ = local;
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  elem2edge_.resize(num_elements());
  elem2edge_orient_.resize(num_elements());
  edge_count_.assign(edges_.size(), 0);
  std::vector<int> first_orient(edges_.size(), 0);
  for (int k = 0; k < num_elements(); ++k)
    for (int j = 0; j < 4; ++j) {
      const Edge& key = local[4 * k + j];
      const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
      const int e = static_cast<int>(it - edges_.begin());
      const int orient = elements_[k][j] < elements_[k][(j + 1) % 4] ? 1 : -1;
      elem2edge_[k][j] = e;
      elem2edge_orient_[k][j] = orient;
      if (++edge_count_[e] > 2)
        throw MeshError("edge shared by more than two elements");
      // neighbours of a conforming counterclockwise mesh traverse a shared edge oppositely
      if (edge_count_[e] == 2 && first_orient[e] == orient)
        throw MeshError("inconsistent orientation across edge " + std::to_string(e + 1));
      first_orient[e] = orient;
    }
}

ElementCoords Mesh::element_coords(int k) const
{
  const Element& el = elements_[k];
  return {nodes_[el[0]], nodes_[el[1]], nodes_[el[2]], nodes_[el[3]]};
}

double Mesh::element_area(int k) const { return signed_area(element_coords(k)); }

double Mesh::total_area() const
{
  double a = 0.0;
  for (int k = 0; k < num_elements(); ++k)
    a += element_area(k);
  return a;
}

Mesh rectangulate(const Rect& domain, int nx, int ny)
{
  if (nx < 1 || ny < 1)
    throw MeshError("rectangulate: nx and ny must be positive");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
    throw MeshError("rectangulate: degenerate domain");

  std::vector<Point2> nodes;
  nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    const double y = domain.y0 + (domain.y1 - domain.y0) * j / ny;
    for (int i = 0; i <= nx; ++i)
      nodes.push_back({domain.x0 + (domain.x1 - domain.x0) * i / nx, y});
  }
  std::vector<Mesh::Element> elements;
  elements.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int n0 = j * (nx + 1) + i;
      elements.push_back({n0, n0 + 1, n0 + nx + 2, n0 + nx + 1});
    }
  return Mesh(std::move(nodes), std::move(elements));
}

Mesh uniform_square_mesh(int level)
{
  if (level < 0 || level > 12)
    throw MeshError("uniform_square_mesh: level out of range");
  const int n = 1 << level;
  return rectangulate(Rect{}, n, n);
}

Mesh refine_uniform(const Mesh& mesh)
{
  const int nn = mesh.num_nodes(), ne = mesh.num_edges();
  std::vector<Point2> nodes = mesh.nodes();
  nodes.reserve(nn + ne + mesh.num_elements());
  for (const auto& e : mesh.edges()) {
    const Point2 a = mesh.nodes()[e[0]], b = mesh.nodes()[e[1]];
    nodes.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }
  for (int k = 0; k < mesh.num_elements(); ++k)
    nodes.push_back(iso_map(mesh.element_coords(k), {0.0, 0.0}));

  std::vector<Mesh::Element> elements;
  elements.reserve(4 * static_cast<std::size_t>(mesh.num_elements()));
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& v = mesh.elements()[k];
    std::array<int, 4> mid{};
    for (int j = 0; j < 4; ++j)
      mid[j] = nn + mesh.element_edges(k)[j];
    const int c = nn + ne + k;
    elements.push_back({v[0], mid[0], c, mid[3]});
    elements.push_back({mid[0], v[1], mid[1], c});
    elements.push_back({c, mid[1], v[2], mid[2]});
    elements.push_back({mid[3], c, mid[2], v[3]});
  }
  return Mesh(std::move(nodes), std::move(elements));
}

Point2 iso_map(const ElementCoords& el, RefPoint pt)
{
  const double n1 = 0.25 * (1 - pt.xi) * (1 - pt.eta);
  const double n2 = 0.25 * (1 + pt.xi) * (1 - pt.eta);
  const double n3 = 0.25 * (1 + pt.xi) * (1 + pt.eta);
  const double n4 = 0.25 * (1 - pt.xi) * (1 + pt.eta);
  return {n1 * el[0].x + n2 * el[1].x + n3 * el[2].x + n4 * el[3].x,
          n1 * el[0].y + n2 * el[1].y + n3 * el[2].y + n4 * el[3].y};
}

Jacobian iso_jacobian(const ElementCoords& el, RefPoint pt)
{
  // nodal gradients of the bilinear basis
  const std::array<double, 4> dxi{-0.25 * (1 - pt.eta), 0.25 * (1 - pt.eta),
                                  0.25 * (1 + pt.eta), -0.25 * (1 + pt.eta)};
  const std::array<double, 4> deta{-0.25 * (1 - pt.xi), -0.25 * (1 + pt.xi),
                                   0.25 * (1 + pt.xi), 0.25 * (1 - pt.xi)};
  Jacobian J;
  for (int i = 0; i < 4; ++i) {
    J.dx_dxi += dxi[i] * el[i].x;
    J.dx_deta += deta[i] * el[i].x;
    J.dy_dxi += dxi[i] * el[i].y;
    J.dy_deta += deta[i] * el[i].y;
  }
  J.det = J.dx_dxi * J.dy_deta - J.dx_deta * J.dy_dxi;
  if (J.det <= kJacobianTolerance)
    throw NonPositiveJacobian(J.det, pt);
  return J;
}

bool is_axis_aligned_rectangle(const ElementCoords& el, double rel_tol)
{
  const double w = el[1].x - el[0].x;
  const double h = el[3].y - el[0].y;
  if (!(w > 0.0) || !(h > 0.0))
    return false;
  const double tol = rel_tol * std::max(w, h);
  return std::abs(el[0].y - el[1].y) <= tol && std::abs(el[2].x - el[1].x) <= tol &&
         std::abs(el[2].y - el[3].y) <= tol && std::abs(el[3].x - el[0].x) <= tol;
}

Mesh read_mesh(const std::filesystem::path& file)
{
  std::ifstream in(file);
  if (!in)
    throw MeshError("cannot open mesh file " + file.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw MeshError("malformed mesh file " + file.string() + ": " + e.what());
  }
  if (!doc.contains("nodes") || !doc.contains("elements"))
    throw MeshError("mesh file needs 'nodes' and 'elements'");
  std::vector<Point2> nodes;
  for (const auto& n : doc.at("nodes"))
    nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
  std::vector<Mesh::Element> elements;
  for (const auto& e : doc.at("elements")) {
    if (e.size() != 4)
      throw MeshError("mesh element must list 4 nodes");
    elements.push_back({e[0].get<int>() - 1, e[1].get<int>() - 1, e[2].get<int>() - 1,
                        e[3].get<int>() - 1});
  }
  return Mesh(std::move(nodes), std::move(elements));
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& file)
{
  nlohmann::json doc;
  doc["nodes"] = nlohmann::json::array();
  for (const auto& n : mesh.nodes())
    doc["nodes"].push_back({n.x, n.y});
  doc["elements"] = nlohmann::json::array();
  for (const auto& e : mesh.elements())
    doc["elements"].push_back({e[0] + 1, e[1] + 1, e[2] + 1, e[3] + 1});
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : mesh.edges())
    doc["edges"].push_back({e[0] + 1, e[1] + 1});
  std::ofstream out(file);
  if (!out)
    throw MeshError("cannot write mesh file " + file.string());
  out << doc.dump(1) << '\n';
}

} // namespace hpfem
