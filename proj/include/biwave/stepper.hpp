#pragma once

#include <cmath>
#include <utility>

#include "biwave/diagnostics.hpp"
#include "biwave/operators.hpp"
#include "biwave/scheme.hpp"
#include "biwave/solver.hpp"

namespace biwave {

struct StepReport {
  FixedPointReport fixed_point;
  double residual_norm{0.0};  ///< ||R||_h of the accepted U^{n+1}
};

struct StepResult {
  SimState state;
  StepReport report;
};

/// ||R||_h for a nodal residual.
inline double residual_norm(const Mesh& mesh, const VectorField& r) {
  return lumped_norm(mesh, r);
}

/// Advances one time level. Solver errors propagate unchanged.
inline StepResult advance(const Mesh& mesh, const SimState& state, const SchemeParams& params) {
  FixedPointResult fp = fixed_point_step(mesh, state, params);
  const double tau = params.tau;

  StepResult out;
  out.report.fixed_point = std::move(fp.report);
  out.report.residual_norm = residual_norm(mesh, residual(mesh, fp.u_next, state, params));

  SimState& next = out.state;
  next.u_prev = state.u_curr;
  next.u_curr = std::move(fp.u_next);
  next.w_curr = std::move(fp.w_next);
  next.v_curr = (1.0 / tau) * (next.u_curr - state.u_curr);
  next.step_index = state.step_index + 1;
  next.time = static_cast<double>(next.step_index) * tau;
  next.damping_accum = state.damping_accum;
  next.initial_energy = state.initial_energy;

  if (params.variant.kind == VariantKind::Conservative) {
    if (state.step_index == 0) {
      // Reference energy picks up -(tau^2/4) (lambda^1 V^0, V^0)_h; only nonzero when V^0 != 0.
      const ScalarField lambda1 = lambda_multiplier(mesh, state, next.u_curr, params);
      double pairing = 0.0;
      for (std::size_t z = 0; z < mesh.num_nodes(); ++z)
        pairing += mesh.lumped_weight(z) * lambda1[z] * dot(state.v_curr[z], state.v_curr[z]);
      next.initial_energy -= 0.25 * tau * tau * pairing;
    }
  } else {
    const VectorField dv = next.v_curr - state.v_curr;
    next.damping_accum += 0.5 * lumped_inner(mesh, dv, dv);
  }
  return out;
}

/// Time reversal of a two-level state: swaps U^n and U^{n-1} and negates V.
/// Advancing the reversed state with a time-symmetric scheme retraces the trajectory.
inline SimState reversed(const Mesh& mesh, const SimState& state) {
  SimState r = state;
  std::swap(r.u_curr, r.u_prev);
  r.v_curr = -1.0 * state.v_curr;
  r.w_curr = negative_laplacian(mesh, r.u_curr);
  if (r.step_index == 0) r.step_index = 1;  // the reversed history is never a first step
  return r;
}

}  // namespace biwave
