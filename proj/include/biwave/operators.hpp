#pragma once

// Lumped-mass P1 operators on a structured mesh.
//
//   (u, v)_h       = sum_z beta_z <u(z), v(z)>
//   S(u)_z         = (grad u, grad phi_z)           (stiffness action K u)
//   Delta_h u (z)  = -S(u)_z / beta_z
//
// All element loops run in simplex order with a fixed accumulation order, so
// results are bitwise reproducible.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <string>
#include <type_traits>
#include <utility>

#include "biwave/field.hpp"
#include "biwave/mesh.hpp"

namespace biwave {

template <class T>
double lumped_inner(const Mesh& mesh, const NodalField<T>& u, const NodalField<T>& v) {
  require_on_mesh(mesh, u);
  require_on_mesh(mesh, v);
  double s = 0.0;
  for (std::size_t z = 0; z < u.size(); ++z) s += mesh.lumped_weight(z) * dot(u[z], v[z]);
  return s;
}

template <class T>
double lumped_norm(const Mesh& mesh, const NodalField<T>& u) {
  return std::sqrt(lumped_inner(mesh, u, u));
}

/// Returns S with S(z) = (grad u, grad phi_z).
template <class T>
NodalField<T> apply_stiffness(const Mesh& mesh, const NodalField<T>& u) {
  require_on_mesh(mesh, u);
  NodalField<T> out(mesh.num_nodes());
  const int nv = mesh.vertices_per_simplex();
  for (std::size_t t = 0; t < mesh.num_simplices(); ++t) {
    const auto& s = mesh.simplex(t);
    for (int a = 0; a < nv; ++a) {
      T acc{};
      for (int b = 0; b < nv; ++b) acc += mesh.local_stiffness(t, a, b) * u[s[b]];
      out[s[a]] += acc;
    }
  }
  return out;
}

/// Applies M^{-1} (division by the lumped weights).
template <class T>
NodalField<T> inverse_lumped_mass(const Mesh& mesh, NodalField<T> f) {
  require_on_mesh(mesh, f);
  for (std::size_t z = 0; z < f.size(); ++z) f[z] *= 1.0 / mesh.lumped_weight(z);
  return f;
}

/// Delta_h u, defined by -(Delta_h u, phi)_h = (grad u, grad phi) for all P1 phi.
template <class T>
NodalField<T> discrete_laplacian(const Mesh& mesh, const NodalField<T>& u) {
  auto s = apply_stiffness(mesh, u);
  for (std::size_t z = 0; z < s.size(); ++z) s[z] *= -1.0 / mesh.lumped_weight(z);
  return s;
}

/// -Delta_h u; the scheme's W = -Delta_h U.
template <class T>
NodalField<T> negative_laplacian(const Mesh& mesh, const NodalField<T>& u) {
  return inverse_lumped_mass(mesh, apply_stiffness(mesh, u));
}

namespace detail {
template <class R>
bool finite_value(const R& v) {
  if constexpr (std::is_same_v<R, double>) {
    return std::isfinite(v);
  } else {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
  }
}
}  // namespace detail

/// I_h f: the field with values f(z). `f` takes a Point and returns double or Vec3.
/// A throwing or non-finite evaluation is reported as InterpolationError for that node.
template <class F>
auto nodal_interpolate(const Mesh& mesh, F&& f) {
  using R = std::decay_t<std::invoke_result_t<F&, const Point&>>;
  static_assert(std::is_same_v<R, double> || std::is_same_v<R, Vec3>,
                "nodal_interpolate: f must return double or Vec3");
  NodalField<R> out(mesh.num_nodes());
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
    R v{};
    try {
      v = f(mesh.node(z));
    } catch (const std::exception& e) {
      throw InterpolationError(z, e.what());
    }
    if (!detail::finite_value(v)) throw InterpolationError(z, "non-finite value");
    out[z] = v;
  }
  return out;
}

/// Gradient of the P1 field on simplex t; row k is grad u_k (3 x d, padded to 3 x 3).
inline std::array<Point, 3> element_gradient(const Mesh& mesh, std::size_t t,
                                             const VectorField& u) {
  std::array<Point, 3> g{};
  const auto& s = mesh.simplex(t);
  for (int a = 0; a < mesh.vertices_per_simplex(); ++a) {
    const auto& ga = mesh.hat_gradient(t, a);
    const Vec3& ua = u[s[a]];
    for (int k = 0; k < 3; ++k)
      for (int r = 0; r < mesh.dim(); ++r) g[k][r] += ua[k] * ga[r];
  }
  return g;
}

inline Point element_gradient(const Mesh& mesh, std::size_t t, const ScalarField& u) {
  Point g{};
  const auto& s = mesh.simplex(t);
  for (int a = 0; a < mesh.vertices_per_simplex(); ++a) {
    const auto& ga = mesh.hat_gradient(t, a);
    for (int r = 0; r < mesh.dim(); ++r) g[r] += u[s[a]] * ga[r];
  }
  return g;
}

struct GradientNorms {
  double l2{0.0};
  double linf{0.0};
};

/// Broken-gradient norms of the P1 field; linf is the elementwise max of the
/// Frobenius norm of the 3 x d gradient.
inline GradientNorms gradient_norms(const Mesh& mesh, const VectorField& u) {
  require_on_mesh(mesh, u);
  GradientNorms out;
  double sq = 0.0;
  for (std::size_t t = 0; t < mesh.num_simplices(); ++t) {
    const auto g = element_gradient(mesh, t, u);
    double f2 = 0.0;
    for (int k = 0; k < 3; ++k)
      for (int r = 0; r < mesh.dim(); ++r) f2 += g[k][r] * g[k][r];
    sq += mesh.volume(t) * f2;
    out.linf = std::max(out.linf, std::sqrt(f2));
  }
  out.l2 = std::sqrt(sq);
  return out;
}

inline GradientNorms gradient_norms(const Mesh& mesh, const ScalarField& u) {
  require_on_mesh(mesh, u);
  GradientNorms out;
  double sq = 0.0;
  for (std::size_t t = 0; t < mesh.num_simplices(); ++t) {
    const auto g = element_gradient(mesh, t, u);
    double f2 = 0.0;
    for (int r = 0; r < mesh.dim(); ++r) f2 += g[r] * g[r];
    sq += mesh.volume(t) * f2;
    out.linf = std::max(out.linf, std::sqrt(f2));
  }
  out.l2 = std::sqrt(sq);
  return out;
}

/// Exact L^2 inner product of two P1 fields (consistent mass matrix).
template <class T>
double consistent_inner(const Mesh& mesh, const NodalField<T>& u, const NodalField<T>& v) {
  require_on_mesh(mesh, u);
  require_on_mesh(mesh, v);
  const int nv = mesh.vertices_per_simplex();
  const double denom = static_cast<double>(nv * (nv + 1));
  double s = 0.0;
  for (std::size_t t = 0; t < mesh.num_simplices(); ++t) {
    const auto& sx = mesh.simplex(t);
    // int_T phi_a phi_b = |T| (1 + delta_ab) / ((d+1)(d+2))
    T su{}, sv{};
    double diag = 0.0;
    for (int a = 0; a < nv; ++a) {
      su += u[sx[a]];
      sv += v[sx[a]];
      diag += dot(u[sx[a]], v[sx[a]]);
    }
    s += mesh.volume(t) * (dot(su, sv) + diag) / denom;
  }
  return s;
}

/// Simplex containing point p (closest match on shared faces).
inline std::size_t locate(const Mesh& mesh, const Point& p) {
  const std::size_t n = mesh.cells_per_axis();
  const int d = mesh.dim();
  std::size_t cell = 0;
  for (int k = d - 1; k >= 0; --k) {
    double x = (p[k] - mesh.box().lower[k]) / mesh.cell_h();
    auto i = static_cast<std::ptrdiff_t>(std::floor(x));
    i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1);
    cell = cell * n + static_cast<std::size_t>(i);
  }
  const std::size_t per_cell = d == 1 ? 1 : (d == 2 ? 2 : 6);
  std::size_t best = cell * per_cell;
  double best_min = -1e300;
  for (std::size_t t = cell * per_cell; t < (cell + 1) * per_cell; ++t) {
    const auto& s = mesh.simplex(t);
    const Point& v0 = mesh.node(s[0]);
    double mn = 1e300;
    for (int a = 0; a <= d; ++a) {
      const auto& g = mesh.hat_gradient(t, a);
      double lam = a == 0 ? 1.0 : 0.0;
      for (int r = 0; r < d; ++r) lam += g[r] * (p[r] - v0[r]);
      mn = std::min(mn, lam);
    }
    if (mn > best_min) {
      best_min = mn;
      best = t;
    }
  }
  return best;
}

/// Point evaluation of the P1 field.
template <class T>
T evaluate(const Mesh& mesh, const NodalField<T>& u, const Point& p) {
  const std::size_t t = locate(mesh, p);
  const auto& s = mesh.simplex(t);
  const Point& v0 = mesh.node(s[0]);
  T out{};
  for (int a = 0; a <= mesh.dim(); ++a) {
    const auto& g = mesh.hat_gradient(t, a);
    double lam = a == 0 ? 1.0 : 0.0;
    for (int r = 0; r < mesh.dim(); ++r) lam += g[r] * (p[r] - v0[r]);
    out += lam * u[s[a]];
  }
  return out;
}

}  // namespace biwave
