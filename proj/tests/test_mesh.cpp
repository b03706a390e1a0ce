#include <filesystem>

#include <gtest/gtest.h>

#include "hpfem/mesh.hpp"
#include "support.hpp"

namespace hpfem {
namespace {

TEST(Rectangulate, Counts)
{
  const Mesh m4 = rectangulate(Rect{}, 4, 4);
  EXPECT_EQ(m4.num_nodes(), 25);
  EXPECT_EQ(m4.num_edges(), 40);
  EXPECT_EQ(m4.num_elements(), 16);

  const Mesh m1 = rectangulate(Rect{}, 1, 1);
  EXPECT_EQ(m1.num_nodes(), 4);
  EXPECT_EQ(m1.num_edges(), 4);
  EXPECT_EQ(m1.num_elements(), 1);

  const Mesh fig = rectangulate(Rect{-3, 3, 0, 2}, 7, 2);
  EXPECT_EQ(fig.num_nodes(), 24);
  EXPECT_EQ(fig.num_edges(), 37);
  EXPECT_EQ(fig.num_elements(), 14);
}

TEST(Rectangulate, NumberingConventions)
{
  const Mesh m = rectangulate(Rect{0, 2, 0, 1}, 2, 1);
  EXPECT_EQ(m.elements()[0], (Mesh::Element{0, 1, 4, 3}));
  EXPECT_EQ(m.elements()[1], (Mesh::Element{1, 2, 5, 4}));
  // lexicographic (min, max) edge order
  const std::vector<Mesh::Edge> expected{{0, 1}, {0, 3}, {1, 2}, {1, 4}, {2, 5}, {3, 4}, {4, 5}};
  EXPECT_EQ(m.edges(), expected);
  EXPECT_EQ(m.element_edges(0), (std::array<int, 4>{0, 3, 5, 1}));
  EXPECT_EQ(m.edge_orientation(0, 1), 1);
  EXPECT_EQ(m.edge_orientation(1, 3), -1);
  EXPECT_TRUE(m.is_boundary_edge(0));
  EXPECT_FALSE(m.is_boundary_edge(3));
}

TEST(Rectangulate, Errors)
{
  EXPECT_THROW(rectangulate(Rect{0, 0, 0, 1}, 2, 2), MeshError);
  EXPECT_THROW(rectangulate(Rect{}, 0, 2), MeshError);
}

TEST(Mesh, RejectsClockwiseElements)
{
  std::vector<Point2> nodes{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_THROW(Mesh(nodes, {{0, 3, 2, 1}}), MeshError);
  EXPECT_THROW(Mesh(nodes, {{0, 1, 2, 7}}), MeshError);
}

TEST(Mesh, EdgeSharing)
{
  for (int level = 0; level <= 5; ++level) {
    const Mesh m = uniform_square_mesh(level);
    const long long n = 1LL << level;
    EXPECT_EQ(m.num_elements(), n * n);
    EXPECT_EQ(m.num_nodes(), (n + 1) * (n + 1));
    EXPECT_EQ(m.num_edges(), 2 * n * (n + 1));
    int interior = 0, boundary = 0;
    for (int e = 0; e < m.num_edges(); ++e)
      (m.is_boundary_edge(e) ? boundary : interior) += 1;
    EXPECT_EQ(2 * interior + boundary, 4 * m.num_elements());
    EXPECT_EQ(boundary, 4 * n);
  }
}

TEST(RefineUniform, Counts)
{
  const Mesh l3 = refine_uniform(uniform_square_mesh(2));
  EXPECT_EQ(l3.num_nodes(), 81);
  EXPECT_EQ(l3.num_edges(), 144);
  EXPECT_EQ(l3.num_elements(), 64);

  EXPECT_EQ(refine_uniform(uniform_square_mesh(0)).num_edges(), 12);

  const Mesh l9 = refine_uniform(uniform_square_mesh(8));
  EXPECT_EQ(l9.num_elements(), 262144);
}

TEST(RefineUniform, PreservesArea)
{
  const Mesh a = rectangulate(Rect{-3, 3, 0, 2}, 7, 2);
  const Mesh b = refine_uniform(refine_uniform(a));
  EXPECT_NEAR(a.total_area(), 12.0, 1e-12);
  EXPECT_NEAR(b.total_area(), a.total_area(), 1e-12);

  const Mesh quad({testing::kExample3Quad.begin(), testing::kExample3Quad.end()}, {{0, 1, 2, 3}});
  EXPECT_NEAR(refine_uniform(quad).total_area(), quad.total_area(), 1e-12);
}

TEST(IsoMap, Examples)
{
  const ElementCoords ref{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
  const Point2 same = iso_map(ref, {0.3, -0.7});
  EXPECT_DOUBLE_EQ(same.x, 0.3);
  EXPECT_DOUBLE_EQ(same.y, -0.7);

  const Point2 c1 = iso_map(testing::kExample3Quad, {-1, -1});
  EXPECT_DOUBLE_EQ(c1.x, 4.5);
  EXPECT_DOUBLE_EQ(c1.y, 1.5);
  const Point2 mid = iso_map(testing::kExample3Quad, {0, 0});
  EXPECT_DOUBLE_EQ(mid.x, 51.0 / 8.0);
  EXPECT_DOUBLE_EQ(mid.y, 15.0 / 8.0);
}

TEST(IsoMap, CornersInterpolate)
{
  const std::array<RefPoint, 4> corners{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
  for (int i = 0; i < 4; ++i) {
    const Point2 p = iso_map(testing::kExample3Quad, corners[i]);
    EXPECT_EQ(p.x, testing::kExample3Quad[i].x);
    EXPECT_EQ(p.y, testing::kExample3Quad[i].y);
  }
}

TEST(IsoJacobian, AffineAndGeneral)
{
  const ElementCoords rect{{{1, 2}, {4, 2}, {4, 7}, {1, 7}}};
  const Jacobian J = iso_jacobian(rect, {0.2, 0.9});
  EXPECT_DOUBLE_EQ(J.dx_dxi, 1.5);
  EXPECT_DOUBLE_EQ(J.dy_deta, 2.5);
  EXPECT_NEAR(J.dx_deta, 0.0, 1e-15);
  EXPECT_NEAR(J.dy_dxi, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(J.det, 3.75);
  EXPECT_GT(iso_jacobian(testing::kExample3Quad, {0, 0}).det, 0.0);

  const ElementCoords clockwise{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}};
  EXPECT_THROW(iso_jacobian(clockwise, {0, 0}), NonPositiveJacobian);
}

TEST(IsoJacobian, MatchesFiniteDifferences)
{
  const double h = 1e-6;
  for (double xi : {-0.8, 0.0, 0.5})
    for (double eta : {-0.3, 0.7}) {
      const Jacobian J = iso_jacobian(testing::kExample3Quad, {xi, eta});
      const Point2 xp = iso_map(testing::kExample3Quad, {xi + h, eta});
      const Point2 xm = iso_map(testing::kExample3Quad, {xi - h, eta});
      const Point2 yp = iso_map(testing::kExample3Quad, {xi, eta + h});
      const Point2 ym = iso_map(testing::kExample3Quad, {xi, eta - h});
      EXPECT_NEAR(J.dx_dxi, (xp.x - xm.x) / (2 * h), 1e-7);
      EXPECT_NEAR(J.dy_dxi, (xp.y - xm.y) / (2 * h), 1e-7);
      EXPECT_NEAR(J.dx_deta, (yp.x - ym.x) / (2 * h), 1e-7);
      EXPECT_NEAR(J.dy_deta, (yp.y - ym.y) / (2 * h), 1e-7);
    }
}

TEST(MeshFile, RoundTrip)
{
  const Mesh m = rectangulate(Rect{-3, 3, 0, 2}, 7, 2);
  const auto path = std::filesystem::temp_directory_path() / "hpfem_mesh_roundtrip.json";
  write_mesh(m, path);
  const Mesh back = read_mesh(path);
  EXPECT_EQ(back.elements(), m.elements());
  EXPECT_EQ(back.edges(), m.edges());
  for (int i = 0; i < m.num_nodes(); ++i) {
    EXPECT_DOUBLE_EQ(back.nodes()[i].x, m.nodes()[i].x);
    EXPECT_DOUBLE_EQ(back.nodes()[i].y, m.nodes()[i].y);
  }
  std::filesystem::remove(path);
  EXPECT_THROW(read_mesh("/nonexistent/mesh.json"), MeshError);
}

} // namespace
} // namespace hpfem
