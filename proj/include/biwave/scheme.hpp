#pragma once

// The three midpoint-type schemes for bi-harmonic wave maps into S^2.
//
// With K the P1 stiffness, M = diag(beta) and a candidate U^{n+1}, each scheme
// asks for the nodal equation
//
//   beta_z d_t^2 U^{n+1}(z) + F(z) = beta_z lambda(z) U_mid(z)
//
// where
//   dissipative/stabilized:  U_mid = (U^{n+1} + U^n) / 2
//   conservative:            U_mid = (U^{n+1} + U^{n-1}) / 2
//   W_mid = M^{-1} K U_mid,  F = K W_mid + c_stab h^alpha K M^{-1} K W_mid.
//
// The multiplier is the unique nodal scalar that makes <equation, U_mid(z)>
// an identity whenever |U^{n+1}(z)| = |U^n(z)| = 1:
//
//   lambda(z) = ( beta_z kin(z) + <U_mid(z), F(z)> ) / ( beta_z |U_mid(z)|^2 )
//
//   dissipative, n >= 1:  kin = -<d_t U^n, d_t U^{n+1/2}>
//   dissipative, n = 0:   kin = -1/2 <V^0, V^1>
//   conservative, n >= 1: kin = -<V^n, V^{n+1}>
//   conservative, n = 0:  kin = -(<V^0, V^1> - 1/2 |V^0|^2)
//
// and lambda(z) = 0 when U_mid(z) is exactly zero.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "biwave/diagnostics.hpp"
#include "biwave/errors.hpp"
#include "biwave/field.hpp"
#include "biwave/operators.hpp"
#include "biwave/scheme_types.hpp"

namespace biwave {

/// Sets up level 0. Requires |U0(z)| = 1 and <U0(z), V0(z)> = 0 to 1e-10.
inline SimState init_state(const Mesh& mesh, const VectorField& u0, const VectorField& v0,
                           const SchemeParams& params) {
  require_on_mesh(mesh, u0);
  require_on_mesh(mesh, v0);
  validate(params, mesh);

  constexpr double tol = 1e-10;
  std::vector<std::size_t> bad_norm, bad_orth;
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
    if (!(std::abs(norm(u0[z]) - 1.0) <= tol)) bad_norm.push_back(z);
    if (!(std::abs(dot(u0[z], v0[z])) <= tol)) bad_orth.push_back(z);
  }
  if (!bad_norm.empty())
    throw ConstraintViolation("init_state: |U0(z)| != 1 at nodes " + detail::node_list(bad_norm),
                              bad_norm);
  if (!bad_orth.empty())
    throw ConstraintViolation(
        "init_state: <U0(z), V0(z)> != 0 at nodes " + detail::node_list(bad_orth), bad_orth);

  if (params.bc.dirichlet()) {
    std::vector<std::size_t> bad;
    for (std::size_t z = 0; z < mesh.num_nodes(); ++z)
      if (mesh.boundary_node(z) &&
          (norm(u0[z] - params.bc.values[z]) > 1e-12 || !is_zero(v0[z])))
        bad.push_back(z);
    if (!bad.empty())
      throw ConstraintViolation(
          "init_state: initial data disagree with the Dirichlet data at nodes " +
              detail::node_list(bad),
          bad);
  }

  SimState s;
  s.u_curr = u0;
  s.u_curr.mark_sphere_valued();
  s.v_curr = v0;
  s.u_prev = u0 - params.tau * v0;
  s.w_curr = negative_laplacian(mesh, u0);
  s.step_index = 0;
  s.time = 0.0;
  s.damping_accum = 0.0;

  const double kin = kinetic_energy(mesh, v0);
  const double bend = bending_energy(mesh, s.w_curr);
  switch (params.variant.kind) {
    case VariantKind::Dissipative:
      s.initial_energy = kin + bend;
      break;
    case VariantKind::Stabilized:
      s.initial_energy = kin + bend + stabilization_energy(mesh, s.w_curr, params);
      break;
    case VariantKind::Conservative:
      // The first step adds the -(tau^2/4)(lambda^1 V^0, V^0)_h correction.
      s.initial_energy =
          kin + 0.5 * (bend + bending_energy(mesh, negative_laplacian(mesh, s.u_prev)));
      break;
  }
  return s;
}

/// Midpoint quantities of a candidate U^{n+1}, shared by the multiplier and the residual.
struct MidpointData {
  VectorField u_mid;
  VectorField w_mid;
  VectorField force;          ///< F = K W_mid (+ stabilization)
  std::vector<double> kin;    ///< kinetic numerator per node
};

/// K W + c h^alpha K M^{-1} K W.
inline VectorField elastic_force(const Mesh& mesh, const VectorField& w,
                                 const SchemeParams& params) {
  VectorField f = apply_stiffness(mesh, w);
  const double weight = params.stabilization_weight(mesh);
  if (weight != 0.0) {
    VectorField g = apply_stiffness(mesh, inverse_lumped_mass(mesh, f));
    g *= weight;
    f += g;
  }
  return f;
}

inline MidpointData midpoint_data(const Mesh& mesh, const SimState& state,
                                  const VectorField& candidate, const SchemeParams& params) {
  require_on_mesh(mesh, candidate);
  const bool conservative = params.variant.kind == VariantKind::Conservative;
  const double tau = params.tau;

  MidpointData d;
  d.u_mid = candidate + (conservative ? state.u_prev : state.u_curr);
  d.u_mid *= 0.5;
  d.w_mid = negative_laplacian(mesh, d.u_mid);
  d.force = elastic_force(mesh, d.w_mid, params);

  d.kin.assign(mesh.num_nodes(), 0.0);
  const bool first = state.step_index == 0;
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
    const Vec3 v_old = state.v_curr[z];  // V^n (the initial velocity at n = 0)
    const Vec3 v_new = (1.0 / tau) * (candidate[z] - state.u_curr[z]);
    if (conservative) {
      d.kin[z] = first ? -(dot(v_old, v_new) - 0.5 * dot(v_old, v_old)) : -dot(v_old, v_new);
    } else {
      d.kin[z] = first ? -0.5 * dot(v_old, v_new) : -dot(v_old, 0.5 * (v_new + v_old));
    }
  }
  return d;
}

inline ScalarField multiplier_from(const Mesh& mesh, const MidpointData& d,
                                   const SchemeParams& params, bool first_step,
                                   std::vector<MultiplierCase>* cases = nullptr) {
  ScalarField lambda(mesh);
  if (cases) cases->assign(mesh.num_nodes(), MultiplierCase::Generic);
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
    if (!params.bc.free_node(mesh, z)) continue;
    const Vec3& um = d.u_mid[z];
    if (is_zero(um)) {
      if (cases) (*cases)[z] = MultiplierCase::ZeroMidpoint;
      continue;
    }
    const double beta = mesh.lumped_weight(z);
    lambda[z] = (beta * d.kin[z] + dot(um, d.force[z])) / (beta * dot(um, um));
    if (cases && first_step) (*cases)[z] = MultiplierCase::FirstStep;
  }
  return lambda;
}

/// Discrete Lagrange multiplier for the step from `state` to `candidate`.
inline ScalarField lambda_multiplier(const Mesh& mesh, const SimState& state,
                                     const VectorField& candidate, const SchemeParams& params,
                                     std::vector<MultiplierCase>* cases = nullptr) {
  return multiplier_from(mesh, midpoint_data(mesh, state, candidate, params), params,
                         state.step_index == 0, cases);
}

/// Nodal residual of the scheme equation tested with phi_z e_k (zero on Dirichlet nodes).
inline VectorField residual(const Mesh& mesh, const VectorField& candidate,
                            const SimState& state, const SchemeParams& params) {
  const MidpointData d = midpoint_data(mesh, state, candidate, params);
  const ScalarField lambda = multiplier_from(mesh, d, params, state.step_index == 0);
  const double inv_tau2 = 1.0 / (params.tau * params.tau);
  VectorField r(mesh);
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
    if (!params.bc.free_node(mesh, z)) continue;
    const double beta = mesh.lumped_weight(z);
    const Vec3 acc = inv_tau2 * (candidate[z] - 2.0 * state.u_curr[z] + state.u_prev[z]);
    r[z] = beta * acc + d.force[z] - (beta * lambda[z]) * d.u_mid[z];
  }
  return r;
}

}  // namespace biwave
