#pragma once

// Discrete energies and per-step records.
//
//   E_h      = 1/2 ||V||_h^2 + 1/2 ||Delta_h U||_h^2
//   E_stab   = E_h + (c_stab h^alpha / 2) ||grad W||^2
//   E_cons   = 1/2 ( ||V^n||_h^2 + 1/2 [ ||Delta_h U^n||_h^2 + ||Delta_h U^{n-1}||_h^2 ] )
//
// Dissipative and stabilized runs satisfy  E(n) + damping(n) = E(0);  the
// conservative scheme keeps E_cons(n) equal to its reference value for n >= 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "biwave/field.hpp"
#include "biwave/operators.hpp"
#include "biwave/scheme_types.hpp"

namespace biwave {

struct EnergyRecord {
  long step{0};
  double time{0.0};
  double e_h{0.0};
  double e_stab{0.0};
  double e_cons{0.0};
  double reference{0.0};  ///< the state's reference energy (variant-dependent)
  double damping_accum{0.0};
  double constraint_violation{0.0};
  double grad_linf{0.0};
  double grad_w_l2{0.0};
  int fp_iterations{0};
  long cg_iterations{0};
};

/// 1/2 ||Delta_h U||_h^2 given W = -Delta_h U.
inline double bending_energy(const Mesh& mesh, const VectorField& w) {
  return 0.5 * lumped_inner(mesh, w, w);
}

inline double kinetic_energy(const Mesh& mesh, const VectorField& v) {
  return 0.5 * lumped_inner(mesh, v, v);
}

/// E_h(V, U).
inline double discrete_energy(const Mesh& mesh, const VectorField& v, const VectorField& u) {
  return kinetic_energy(mesh, v) + bending_energy(mesh, negative_laplacian(mesh, u));
}

/// (c_stab h^alpha / 2) ||grad W||^2.
inline double stabilization_energy(const Mesh& mesh, const VectorField& w,
                                   const SchemeParams& params) {
  const double weight = params.stabilization_weight(mesh);
  if (weight == 0.0) return 0.0;
  const double g = gradient_norms(mesh, w).l2;
  return 0.5 * weight * g * g;
}

inline EnergyRecord energy(const Mesh& mesh, const SimState& state, const SchemeParams& params,
                           int fp_iterations = 0, long cg_iterations = 0) {
  EnergyRecord r;
  r.step = state.step_index;
  r.time = state.time;
  const double kin = kinetic_energy(mesh, state.v_curr);
  const double bend = bending_energy(mesh, state.w_curr);
  const double bend_prev = bending_energy(mesh, negative_laplacian(mesh, state.u_prev));
  r.e_h = kin + bend;
  r.e_stab = r.e_h + stabilization_energy(mesh, state.w_curr, params);
  r.e_cons = kin + 0.5 * (bend + bend_prev);
  r.reference = state.initial_energy;
  r.damping_accum = state.damping_accum;
  r.constraint_violation = constraint_violation(state.u_curr);
  r.grad_linf = gradient_norms(mesh, state.u_curr).linf;
  r.grad_w_l2 = gradient_norms(mesh, state.w_curr).l2;
  r.fp_iterations = fp_iterations;
  r.cg_iterations = cg_iterations;
  return r;
}

/// The energy each variant's law is stated for.
inline double law_energy(const EnergyRecord& r, VariantKind kind) {
  switch (kind) {
    case VariantKind::Dissipative: return r.e_h;
    case VariantKind::Stabilized: return r.e_stab;
    case VariantKind::Conservative: return r.e_cons;
  }
  return r.e_h;
}

/// Relative defect of the discrete energy law over a run's history.
inline double energy_law_residual(std::span<const EnergyRecord> history, VariantKind kind) {
  if (history.size() < 2) return 0.0;
  double worst = 0.0;
  if (kind == VariantKind::Conservative) {
    const double ref = history.back().reference;
    const double denom = std::max(std::abs(ref), 1e-30);
    for (const auto& r : history) {
      if (r.step < 1) continue;
      worst = std::max(worst, std::abs(r.e_cons - ref) / denom);
    }
    return worst;
  }
  const double e0 = law_energy(history.front(), kind);
  const double denom = std::max(e0, 1e-30);
  for (const auto& r : history)
    worst = std::max(worst, std::abs(law_energy(r, kind) + r.damping_accum - e0) / denom);
  return worst;
}

/// Largest step-to-step increase of the variant's energy, relative to E(0).
inline double max_energy_increase(std::span<const EnergyRecord> history, VariantKind kind) {
  if (history.size() < 2) return 0.0;
  const double denom = std::max(law_energy(history.front(), kind), 1e-30);
  double worst = 0.0;
  for (std::size_t i = 1; i < history.size(); ++i)
    worst = std::max(worst, (law_energy(history[i], kind) - law_energy(history[i - 1], kind)) /
                                denom);
  return worst;
}

}  // namespace biwave
