#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <set>

#include "biwave/mesh.hpp"

using namespace biwave;

namespace {

Mesh unit_mesh(MeshKind kind, std::size_t n) { return build_mesh(kind, n, Box::cube(-1.0, 1.0)); }

double edge_dot(const Mesh& m, std::size_t t, int apex, int a, int b) {
  const Point& o = m.node(m.simplex(t)[apex]);
  const Point& p = m.node(m.simplex(t)[a]);
  const Point& q = m.node(m.simplex(t)[b]);
  double s = 0.0;
  for (int r = 0; r < 3; ++r) s += (p[r] - o[r]) * (q[r] - o[r]);
  return s;
}

}  // namespace

TEST(Mesh, CountsPerKind) {
  for (std::size_t n : {1u, 3u, 8u}) {
    const Mesh m1 = unit_mesh(MeshKind::Interval1D, n);
    EXPECT_EQ(m1.num_nodes(), n + 1);
    EXPECT_EQ(m1.num_simplices(), n);
    const Mesh m2 = unit_mesh(MeshKind::Type1Triangles2D, n);
    EXPECT_EQ(m2.num_nodes(), (n + 1) * (n + 1));
    EXPECT_EQ(m2.num_simplices(), 2 * n * n);
    const Mesh m3 = unit_mesh(MeshKind::Type2Tetrahedra3D, n);
    EXPECT_EQ(m3.num_nodes(), (n + 1) * (n + 1) * (n + 1));
    EXPECT_EQ(m3.num_simplices(), 6 * n * n * n);
  }
}

TEST(Mesh, SpacingAndDiameter) {
  const Mesh m = unit_mesh(MeshKind::Type2Tetrahedra3D, 4);
  EXPECT_DOUBLE_EQ(m.cell_h(), 0.5);
  EXPECT_DOUBLE_EQ(m.h(), 0.5 * std::sqrt(3.0));
  EXPECT_EQ(m.dim(), 3);
  EXPECT_EQ(m.vertices_per_simplex(), 4);
}

TEST(Mesh, LexicographicNodes) {
  const Mesh m = unit_mesh(MeshKind::Type1Triangles2D, 4);
  EXPECT_EQ(m.node(0), (Point{-1.0, -1.0, 0.0}));
  EXPECT_EQ(m.node(1), (Point{-0.5, -1.0, 0.0}));
  EXPECT_EQ(m.node(5), (Point{-1.0, -0.5, 0.0}));
  EXPECT_EQ(m.node(24), (Point{1.0, 1.0, 0.0}));
  for (std::size_t z = 0; z < m.num_nodes(); ++z) EXPECT_EQ(m.node_at(m.grid_index(z)), z);
}

TEST(Mesh, VolumesEqualCellFractions) {
  const Mesh m2 = unit_mesh(MeshKind::Type1Triangles2D, 8);
  for (std::size_t t = 0; t < m2.num_simplices(); ++t)
    EXPECT_NEAR(m2.volume(t), 0.25 * 0.25 / 2.0, 1e-15);
  const Mesh m3 = unit_mesh(MeshKind::Type2Tetrahedra3D, 4);
  for (std::size_t t = 0; t < m3.num_simplices(); ++t)
    EXPECT_NEAR(m3.volume(t), 0.125 / 6.0, 1e-15);
}

TEST(Mesh, LumpedWeights1D) {
  const Mesh m = unit_mesh(MeshKind::Interval1D, 8);
  EXPECT_DOUBLE_EQ(m.lumped_weight(0), 0.125);
  EXPECT_DOUBLE_EQ(m.lumped_weight(8), 0.125);
  for (std::size_t z = 1; z < 8; ++z) EXPECT_DOUBLE_EQ(m.lumped_weight(z), 0.25);
}

TEST(Mesh, LumpedWeights2D) {
  // Interior nodes touch six triangles of area h^2/2; the corners on the
  // cut diagonal touch two, the other two corners one.
  const std::size_t n = 4;
  const Mesh m = unit_mesh(MeshKind::Type1Triangles2D, n);
  const double h2 = 0.25;
  for (std::size_t z = 0; z < m.num_nodes(); ++z) {
    const auto g = m.grid_index(z);
    const bool ex = g[0] == 0 || g[0] == n, ey = g[1] == 0 || g[1] == n;
    double expected = h2;
    if (ex && ey) {
      const bool diagonal_corner = (g[0] == n && g[1] == 0) || (g[0] == 0 && g[1] == n);
      expected = diagonal_corner ? h2 / 3.0 : h2 / 6.0;
    } else if (ex || ey) {
      expected = h2 / 2.0;
    }
    EXPECT_NEAR(m.lumped_weight(z), expected, 1e-15) << "node " << z;
  }
}

TEST(Mesh, LumpedWeights3DInterior) {
  const Mesh m = unit_mesh(MeshKind::Type2Tetrahedra3D, 4);
  double total = 0.0;
  for (std::size_t z = 0; z < m.num_nodes(); ++z) {
    total += m.lumped_weight(z);
    if (!m.boundary_node(z)) EXPECT_NEAR(m.lumped_weight(z), 0.125, 1e-15);
  }
  EXPECT_NEAR(total, 8.0, 1e-13);
}

TEST(Mesh, RightAngleAtFirstVertex) {
  const Mesh m2 = unit_mesh(MeshKind::Type1Triangles2D, 3);
  for (std::size_t t = 0; t < m2.num_simplices(); ++t)
    EXPECT_NEAR(edge_dot(m2, t, 0, 1, 2), 0.0, 1e-15);
  const Mesh m3 = unit_mesh(MeshKind::Type2Tetrahedra3D, 2);
  for (std::size_t t = 0; t < m3.num_simplices(); ++t) {
    EXPECT_NEAR(edge_dot(m3, t, 0, 1, 2), 0.0, 1e-15);
    EXPECT_NEAR(edge_dot(m3, t, 0, 1, 3), 0.0, 1e-15);
  }
}

TEST(Mesh, KuhnSplitSharesMainDiagonal) {
  // Every tetrahedron of a cube contains its lowest and highest corner.
  const Mesh m = unit_mesh(MeshKind::Type2Tetrahedra3D, 1);
  std::set<std::array<std::size_t, 4>> distinct;
  for (std::size_t t = 0; t < m.num_simplices(); ++t) {
    auto s = m.simplex(t);
    EXPECT_EQ(s[1], 0u);
    EXPECT_EQ(s[3], 7u);
    std::sort(s.begin(), s.end());
    distinct.insert(s);
  }
  EXPECT_EQ(distinct.size(), 6u);
}

TEST(Mesh, HatGradientsSumToZero) {
  for (MeshKind kind : {MeshKind::Interval1D, MeshKind::Type1Triangles2D,
                        MeshKind::Type2Tetrahedra3D}) {
    const Mesh m = unit_mesh(kind, 3);
    for (std::size_t t = 0; t < m.num_simplices(); ++t)
      for (int r = 0; r < 3; ++r) {
        double s = 0.0;
        for (int a = 0; a < m.vertices_per_simplex(); ++a) s += m.hat_gradient(t, a)[r];
        EXPECT_NEAR(s, 0.0, 1e-13);
      }
  }
}

TEST(Mesh, HatGradientsIn1D) {
  const Mesh m = unit_mesh(MeshKind::Interval1D, 4);
  EXPECT_DOUBLE_EQ(m.hat_gradient(0, 0)[0], -2.0);
  EXPECT_DOUBLE_EQ(m.hat_gradient(0, 1)[0], 2.0);
  EXPECT_DOUBLE_EQ(m.local_stiffness(0, 0, 0), 2.0);
  EXPECT_DOUBLE_EQ(m.local_stiffness(0, 0, 1), -2.0);
}

TEST(Mesh, BoundaryFlags) {
  const std::size_t n = 5;
  const Mesh m2 = unit_mesh(MeshKind::Type1Triangles2D, n);
  std::size_t count = 0;
  for (std::size_t z = 0; z < m2.num_nodes(); ++z) count += m2.boundary_node(z);
  EXPECT_EQ(count, 4 * n);
  const Mesh m3 = unit_mesh(MeshKind::Type2Tetrahedra3D, n);
  count = 0;
  for (std::size_t z = 0; z < m3.num_nodes(); ++z) count += m3.boundary_node(z);
  EXPECT_EQ(count, (n + 1) * (n + 1) * (n + 1) - (n - 1) * (n - 1) * (n - 1));
}

TEST(Mesh, DeepInteriorNodes) {
  const std::size_t n = 8;
  const Mesh m = unit_mesh(MeshKind::Type1Triangles2D, n);
  std::size_t count = 0;
  for (std::size_t z = 0; z < m.num_nodes(); ++z) count += deep_interior_node(m, z);
  EXPECT_EQ(count, (n - 3) * (n - 3));
}

TEST(Mesh, UpperBoundIsExact) {
  const Mesh m = build_mesh(MeshKind::Interval1D, 3, Box::cube(0.0, 0.1));
  EXPECT_EQ(m.node(3)[0], 0.1);
}

TEST(Mesh, Deterministic) {
  const Mesh a = unit_mesh(MeshKind::Type2Tetrahedra3D, 3);
  const Mesh b = unit_mesh(MeshKind::Type2Tetrahedra3D, 3);
  for (std::size_t t = 0; t < a.num_simplices(); ++t) EXPECT_EQ(a.simplex(t), b.simplex(t));
  for (std::size_t z = 0; z < a.num_nodes(); ++z) {
    EXPECT_EQ(a.node(z), b.node(z));
    EXPECT_EQ(a.lumped_weight(z), b.lumped_weight(z));
  }
}

TEST(Mesh, RejectsBadInput) {
  EXPECT_THROW(unit_mesh(MeshKind::Interval1D, 0), ConfigError);
  EXPECT_THROW(build_mesh(MeshKind::Interval1D, 4, Box::cube(1.0, 1.0)), ConfigError);
  EXPECT_THROW(build_mesh(MeshKind::Type1Triangles2D, 4, Box{{0, 0, 0}, {1, 2, 1}}), ConfigError);
  EXPECT_NO_THROW(build_mesh(MeshKind::Interval1D, 4, Box{{0, 0, 0}, {1, 2, 1}}));
}
