#pragma once

// Measurable forms of the discrete identities and estimates the scheme relies
// on: the discrete product rule, finite-difference consistency of Delta_h,
// lumped/consistent norm bounds, and a convergence-rate fit.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>

#include "biwave/field.hpp"
#include "biwave/operators.hpp"

namespace biwave {

/// The four pairings of the discrete product rule for -Delta_h I_h[v w]
/// tested against u, plus the absolute defect.
struct ProductRuleTerms {
  double lhs{0.0};          ///< (-Delta_h I_h[v w], u)_h
  double laplace_v{0.0};    ///< ((-Delta_h v) I_h w, u)_h
  double laplace_w{0.0};    ///< (v (-Delta_h I_h w), u)_h
  double mixed{0.0};        ///< 2 (grad v . grad I_h w, u), exact element integrals
  double residual{0.0};     ///< |lhs - (laplace_v + laplace_w - mixed)|

  double scale() const {
    return std::abs(lhs) + std::abs(laplace_v) + std::abs(laplace_w) + std::abs(mixed);
  }
};

template <class W>
ProductRuleTerms product_rule_terms(const Mesh& mesh, const VectorField& v, W&& w,
                                    const VectorField& u) {
  require_on_mesh(mesh, v);
  require_on_mesh(mesh, u);
  const ScalarField wi = nodal_interpolate(mesh, w);

  VectorField vw(mesh);
  for (std::size_t z = 0; z < vw.size(); ++z) vw[z] = wi[z] * v[z];

  const VectorField k_vw = apply_stiffness(mesh, vw);
  const VectorField k_v = apply_stiffness(mesh, v);
  const ScalarField k_w = apply_stiffness(mesh, wi);

  ProductRuleTerms out;
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
    out.lhs += dot(k_vw[z], u[z]);
    out.laplace_v += wi[z] * dot(k_v[z], u[z]);
    out.laplace_w += k_w[z] * dot(v[z], u[z]);
  }

  // grad v and grad I_h w are constant per element and u is linear, so the
  // element integral is |T| times the vertex mean of u.
  const int nv = mesh.vertices_per_simplex();
  for (std::size_t t = 0; t < mesh.num_simplices(); ++t) {
    const auto gv = element_gradient(mesh, t, v);
    const auto gw = element_gradient(mesh, t, wi);
    Vec3 mean_u{};
    for (int a = 0; a < nv; ++a) mean_u += u[mesh.simplex(t)[a]];
    mean_u *= 1.0 / nv;
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      double gg = 0.0;
      for (int r = 0; r < mesh.dim(); ++r) gg += gv[k][r] * gw[r];
      s += gg * mean_u[k];
    }
    out.mixed += 2.0 * mesh.volume(t) * s;
  }
  out.residual = std::abs(out.lhs - (out.laplace_v + out.laplace_w - out.mixed));
  return out;
}

/// Absolute defect of the discrete product rule.
template <class W>
double product_rule_residual(const Mesh& mesh, const VectorField& v, W&& w,
                             const VectorField& u) {
  return product_rule_terms(mesh, v, std::forward<W>(w), u).residual;
}

/// max over deep-interior nodes of |(Delta_h I_h phi)(z) - lap_phi(z)|.
template <class Phi, class Lap>
double laplacian_consistency_error(const Mesh& mesh, Phi&& phi, Lap&& lap_phi) {
  const ScalarField p = nodal_interpolate(mesh, phi);
  const ScalarField lp = discrete_laplacian(mesh, p);
  double err = 0.0;
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
    if (!deep_interior_node(mesh, z)) continue;
    err = std::max(err, std::abs(lp[z] - lap_phi(mesh.node(z))));
  }
  return err;
}

/// Least-squares slope of log(error) against log(h).
inline double fitted_rate(std::span<const double> h, std::span<const double> err) {
  if (h.size() != err.size() || h.size() < 2)
    throw std::invalid_argument("fitted_rate: need at least two (h, error) pairs");
  const double n = static_cast<double>(h.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// ||v||_h^2 / ||v||^2 for a P1 field (lumped over exact L^2).
template <class T>
double lumped_to_exact_ratio(const Mesh& mesh, const NodalField<T>& v) {
  return lumped_inner(mesh, v, v) / consistent_inner(mesh, v, v);
}

/// ||Delta_h u||_h * cell_h / ||grad u||; bounded above on uniform meshes.
inline double inverse_estimate_constant(const Mesh& mesh, const VectorField& u) {
  const double lap = lumped_norm(mesh, discrete_laplacian(mesh, u));
  const double grad = gradient_norms(mesh, u).l2;
  return lap * mesh.cell_h() / grad;
}

}  // namespace biwave
