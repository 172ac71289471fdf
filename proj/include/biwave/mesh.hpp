#pragma once

// Structured right-angled simplicial meshes on a uniform tensor grid.
//
// Node numbering is lexicographic in the grid indices with x fastest.  Every
// simplex lists a right-angle vertex first:
//   Interval1D         [i, i+1]
//   Type1Triangles2D   each grid square (a,b,c,d) = (00,10,01,11) is halved
//                      along the b-c diagonal into (a,b,c) and (d,c,b)
//   Type2Tetrahedra3D  each cube is cut into the six Kuhn orthoschemes
//                      0 -> e_p -> e_p+e_q -> 111, stored as (v1, v0, v2, v3)

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "biwave/errors.hpp"

namespace biwave {

enum class MeshKind { Interval1D, Type1Triangles2D, Type2Tetrahedra3D };

inline int dimension_of(MeshKind kind) {
  switch (kind) {
    case MeshKind::Interval1D: return 1;
    case MeshKind::Type1Triangles2D: return 2;
    case MeshKind::Type2Tetrahedra3D: return 3;
  }
  return 0;
}

inline std::string to_string(MeshKind kind) {
  switch (kind) {
    case MeshKind::Interval1D: return "Interval1D";
    case MeshKind::Type1Triangles2D: return "Type1Triangles2D";
    case MeshKind::Type2Tetrahedra3D: return "Type2Tetrahedra3D";
  }
  return "?";
}

/// Axis-aligned box; only the first `dim` entries are used.
struct Box {
  std::array<double, 3> lower{-1.0, -1.0, -1.0};
  std::array<double, 3> upper{1.0, 1.0, 1.0};

  static Box cube(double lo, double hi) { return Box{{lo, lo, lo}, {hi, hi, hi}}; }
};

using Point = std::array<double, 3>;
using Simplex = std::array<std::size_t, 4>;

class Mesh;
inline Mesh build_mesh(MeshKind kind, std::size_t n, const Box& box);

class Mesh {
 public:
  MeshKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int vertices_per_simplex() const { return dim_ + 1; }
  std::size_t cells_per_axis() const { return n_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_simplices() const { return simplices_.size(); }

  const Point& node(std::size_t z) const { return nodes_[z]; }
  const Simplex& simplex(std::size_t t) const { return simplices_[t]; }
  double volume(std::size_t t) const { return volume_[t]; }
  /// Gradient of the barycentric (hat) function of local vertex `a` on simplex `t`.
  const Point& hat_gradient(std::size_t t, int a) const { return gradients_[t][a]; }
  /// |T| <grad phi_a, grad phi_b> on simplex t.
  double local_stiffness(std::size_t t, int a, int b) const { return stiffness_[t][a][b]; }

  double lumped_weight(std::size_t z) const { return beta_[z]; }
  const std::vector<double>& lumped_weights() const { return beta_; }
  bool boundary_node(std::size_t z) const { return boundary_[z] != 0; }

  /// Maximum element diameter.
  double h() const { return h_; }
  /// Spacing of the underlying tensor grid.
  double cell_h() const { return cell_h_; }
  const Box& box() const { return box_; }
  double domain_volume() const { return std::pow(cell_h_ * static_cast<double>(n_), dim_); }

  std::array<std::size_t, 3> grid_index(std::size_t z) const {
    const std::size_t m = n_ + 1;
    std::array<std::size_t, 3> g{0, 0, 0};
    for (int k = 0; k < dim_; ++k) {
      g[k] = z % m;
      z /= m;
    }
    return g;
  }

  std::size_t node_at(const std::array<std::size_t, 3>& g) const {
    const std::size_t m = n_ + 1;
    std::size_t z = 0;
    for (int k = dim_ - 1; k >= 0; --k) z = z * m + g[k];
    return z;
  }

  friend Mesh build_mesh(MeshKind kind, std::size_t n, const Box& box);

 private:
  void finalize();

  MeshKind kind_{MeshKind::Interval1D};
  int dim_{1};
  std::size_t n_{0};
  Box box_{};
  double h_{0.0};
  double cell_h_{0.0};
  std::vector<Point> nodes_;
  std::vector<Simplex> simplices_;
  std::vector<double> volume_;
  std::vector<std::array<Point, 4>> gradients_;
  std::vector<std::array<std::array<double, 4>, 4>> stiffness_;
  std::vector<double> beta_;
  std::vector<char> boundary_;
};

namespace detail {

// Barycentric gradients and volume of a d-simplex from its vertex coordinates.
inline void simplex_geometry(int d, const std::array<Point, 4>& v, std::array<Point, 4>& grad,
                             double& vol) {
  // Columns of J are the edge vectors v_i - v_0; grad phi_i (i >= 1) is row i-1 of J^{-1}.
  double J[3][3] = {};
  for (int i = 0; i < d; ++i)
    for (int r = 0; r < d; ++r) J[r][i] = v[i + 1][r] - v[0][r];

  double inv[3][3] = {};
  double det = 0.0;
  if (d == 1) {
    det = J[0][0];
    inv[0][0] = 1.0 / det;
  } else if (d == 2) {
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    inv[0][0] = J[1][1] / det;
    inv[0][1] = -J[0][1] / det;
    inv[1][0] = -J[1][0] / det;
    inv[1][1] = J[0][0] / det;
  } else {
    const double c00 = J[1][1] * J[2][2] - J[1][2] * J[2][1];
    const double c01 = J[1][2] * J[2][0] - J[1][0] * J[2][2];
    const double c02 = J[1][0] * J[2][1] - J[1][1] * J[2][0];
    det = J[0][0] * c00 + J[0][1] * c01 + J[0][2] * c02;
    inv[0][0] = c00 / det;
    inv[1][0] = c01 / det;
    inv[2][0] = c02 / det;
    inv[0][1] = (J[0][2] * J[2][1] - J[0][1] * J[2][2]) / det;
    inv[1][1] = (J[0][0] * J[2][2] - J[0][2] * J[2][0]) / det;
    inv[2][1] = (J[0][1] * J[2][0] - J[0][0] * J[2][1]) / det;
    inv[0][2] = (J[0][1] * J[1][2] - J[0][2] * J[1][1]) / det;
    inv[1][2] = (J[0][2] * J[1][0] - J[0][0] * J[1][2]) / det;
    inv[2][2] = (J[0][0] * J[1][1] - J[0][1] * J[1][0]) / det;
  }
  const double fact[] = {1.0, 1.0, 2.0, 6.0};
  vol = std::abs(det) / fact[d];

  for (auto& g : grad) g = Point{0.0, 0.0, 0.0};
  for (int i = 1; i <= d; ++i)
    for (int r = 0; r < d; ++r) grad[i][r] = inv[i - 1][r];
  for (int r = 0; r < d; ++r) {
    double s = 0.0;
    for (int i = 1; i <= d; ++i) s += grad[i][r];
    grad[0][r] = -s;
  }
}

}  // namespace detail

inline void Mesh::finalize() {
  const std::size_t nt = simplices_.size();
  const int nv = dim_ + 1;
  volume_.assign(nt, 0.0);
  gradients_.assign(nt, {});
  stiffness_.assign(nt, {});
  beta_.assign(nodes_.size(), 0.0);
  for (std::size_t t = 0; t < nt; ++t) {
    std::array<Point, 4> v{};
    for (int a = 0; a < nv; ++a) v[a] = nodes_[simplices_[t][a]];
    detail::simplex_geometry(dim_, v, gradients_[t], volume_[t]);
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < nv; ++b) {
        double s = 0.0;
        for (int r = 0; r < dim_; ++r) s += gradients_[t][a][r] * gradients_[t][b][r];
        stiffness_[t][a][b] = volume_[t] * s;
      }
    for (int a = 0; a < nv; ++a) beta_[simplices_[t][a]] += volume_[t] / nv;
  }
}

/// Builds the structured mesh with n cells per axis on a cubic box.
inline Mesh build_mesh(MeshKind kind, std::size_t n, const Box& box) {
  if (n == 0) throw ConfigError("build_mesh: cells_per_axis must be positive");
  const int d = dimension_of(kind);
  const double side = box.upper[0] - box.lower[0];
  if (!(side > 0.0) || !std::isfinite(side))
    throw ConfigError("build_mesh: degenerate box");
  for (int k = 1; k < d; ++k) {
    const double s = box.upper[k] - box.lower[k];
    if (std::abs(s - side) > 1e-14 * std::abs(side))
      throw ConfigError("build_mesh: structured meshes require equal axis lengths");
  }

  Mesh m;
  m.kind_ = kind;
  m.dim_ = d;
  m.n_ = n;
  m.box_ = box;
  m.cell_h_ = side / static_cast<double>(n);
  m.h_ = m.cell_h_ * std::sqrt(static_cast<double>(d));

  const std::size_t np = n + 1;
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= np;
  m.nodes_.resize(total);
  m.boundary_.assign(total, 0);
  for (std::size_t z = 0; z < total; ++z) {
    const auto g = m.grid_index(z);
    Point p{0.0, 0.0, 0.0};
    bool on_boundary = false;
    for (int k = 0; k < d; ++k) {
      // Pin the last grid line to the exact upper bound.
      p[k] = g[k] == n ? box.upper[k]
                       : box.lower[k] + static_cast<double>(g[k]) * m.cell_h_;
      on_boundary = on_boundary || g[k] == 0 || g[k] == n;
    }
    m.nodes_[z] = p;
    m.boundary_[z] = on_boundary ? 1 : 0;
  }

  auto at = [&](std::size_t i, std::size_t j, std::size_t k) { return m.node_at({i, j, k}); };

  switch (kind) {
    case MeshKind::Interval1D:
      for (std::size_t i = 0; i < n; ++i) m.simplices_.push_back({i, i + 1, 0, 0});
      break;
    case MeshKind::Type1Triangles2D:
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t a = at(i, j, 0), b = at(i + 1, j, 0);
          const std::size_t c = at(i, j + 1, 0), e = at(i + 1, j + 1, 0);
          m.simplices_.push_back({a, b, c, 0});
          m.simplices_.push_back({e, c, b, 0});
        }
      break;
    case MeshKind::Type2Tetrahedra3D: {
      static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                          {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t i = 0; i < n; ++i)
            for (const auto& p : perms) {
              std::array<std::size_t, 3> g{i, j, k};
              const std::size_t v0 = m.node_at(g);
              ++g[p[0]];
              const std::size_t v1 = m.node_at(g);
              ++g[p[1]];
              const std::size_t v2 = m.node_at(g);
              ++g[p[2]];
              const std::size_t v3 = m.node_at(g);
              m.simplices_.push_back({v1, v0, v2, v3});
            }
      break;
    }
  }
  m.finalize();
  return m;
}

/// Nodes whose whole grid neighbourhood (including diagonals) is interior.
inline bool deep_interior_node(const Mesh& m, std::size_t z) {
  const auto g = m.grid_index(z);
  for (int k = 0; k < m.dim(); ++k)
    if (g[k] < 2 || g[k] + 2 > m.cells_per_axis()) return false;
  return true;
}

}  // namespace biwave
