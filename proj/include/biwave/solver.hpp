#pragma once

// Fixed-point iteration with projection for one time step.
//
// Starting from u*^0 = U^n, each outer iteration freezes the multiplier at the
// projected iterate u*^l, solves the linear system
//
//   (1/tau) M u + (tau/2) (K M^{-1} K + c h^a K M^{-1} K M^{-1} K) u - (tau/2) M Lambda u
//     = (1/tau) M (2 U^n - U^{n-1}) - (tau/2) F(W_old) + (tau/2) M Lambda U_old
//
// (U_old = U^n, or U^{n-1} for the conservative scheme), normalises the
// result nodally and stops once max_z |u^{l+1}(z) - u*^l(z)| <= eps.  The
// returned U^{n+1} is the normalised iterate.
//
// The operator acts identically on the three components, so the linear solve
// is three scalar conjugate-gradient runs executed in lockstep.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "biwave/errors.hpp"
#include "biwave/field.hpp"
#include "biwave/operators.hpp"
#include "biwave/scheme.hpp"
#include "biwave/scheme_types.hpp"

namespace biwave {

inline constexpr double kDegeneracyFloor = 1e-8;

/// Normalises every nodal value; throws DegenerateNode below the floor.
inline VectorField project_to_sphere(const VectorField& u) {
  VectorField out(u.size());
  std::vector<std::size_t> bad;
  for (std::size_t z = 0; z < u.size(); ++z) {
    const double len = norm(u[z]);
    if (!(len >= kDegeneracyFloor)) {
      bad.push_back(z);
      continue;
    }
    out[z] = (1.0 / len) * u[z];
  }
  if (!bad.empty())
    throw DegenerateNode("projection undefined, |u(z)| below 1e-8 at nodes " +
                             detail::node_list(bad),
                         bad);
  out.mark_sphere_valued();
  return out;
}

/// The symmetric substep operator with the multiplier frozen.
class SubstepOperator {
 public:
  SubstepOperator(const Mesh& mesh, const SchemeParams& params, const ScalarField& lambda)
      : mesh_(mesh),
        tau_(params.tau),
        stab_(params.stabilization_weight(mesh)),
        lambda_(lambda),
        bc_(params.bc) {
    require_on_mesh(mesh, lambda);
  }

  /// Full operator, no boundary restriction.
  VectorField apply_full(const VectorField& x) const {
    VectorField ky = inverse_lumped_mass(mesh_, apply_stiffness(mesh_, x));
    VectorField out = apply_stiffness(mesh_, ky);  // K M^-1 K x
    if (stab_ != 0.0) {
      VectorField s = apply_stiffness(mesh_, inverse_lumped_mass(mesh_, out));
      s *= stab_;
      out += s;
    }
    const double half_tau = 0.5 * tau_;
    for (std::size_t z = 0; z < x.size(); ++z) {
      const double beta = mesh_.lumped_weight(z);
      out[z] = (beta / tau_) * x[z] + half_tau * out[z] - (half_tau * beta * lambda_[z]) * x[z];
    }
    return out;
  }

  /// Operator restricted to free (non-Dirichlet) nodes.
  VectorField apply(const VectorField& x) const {
    if (!bc_.dirichlet()) return apply_full(x);
    VectorField out = apply_full(restrict(x));
    return restrict(std::move(out));
  }

  VectorField restrict(VectorField x) const {
    if (bc_.dirichlet())
      for (std::size_t z = 0; z < x.size(); ++z)
        if (mesh_.boundary_node(z)) x[z] = Vec3{};
    return x;
  }

 private:
  const Mesh& mesh_;
  double tau_;
  double stab_;
  const ScalarField& lambda_;
  const BoundaryCondition& bc_;
};

struct LinearSolveStats {
  int iterations{0};
  Vec3 relative_residual{};
};

/// Lockstep conjugate gradients for A x = b, one independent run per component.
/// Throws LinearSolveFailure on non-positive curvature or when max_iters is hit.
template <class Op>
VectorField conjugate_gradient(const Op& apply, const VectorField& b, VectorField x,
                               double tol, int max_iters, LinearSolveStats* stats = nullptr) {
  const std::size_t n = b.size();
  VectorField ax = apply(x);
  VectorField r = b - ax;
  Vec3 bnorm{}, rr{};
  for (std::size_t z = 0; z < n; ++z)
    for (int k = 0; k < 3; ++k) {
      bnorm[k] += b[z][k] * b[z][k];
      rr[k] += r[z][k] * r[z][k];
    }
  std::array<bool, 3> active{};
  for (int k = 0; k < 3; ++k) {
    bnorm[k] = std::sqrt(bnorm[k]);
    if (bnorm[k] == 0.0) {
      for (std::size_t z = 0; z < n; ++z) x[z][k] = 0.0;
      rr[k] = 0.0;
    }
    active[k] = bnorm[k] > 0.0 && std::sqrt(rr[k]) > tol * bnorm[k];
  }

  VectorField p = r;
  int it = 0;
  while (active[0] || active[1] || active[2]) {
    if (it == max_iters)
      throw LinearSolveFailure("conjugate gradient stalled after " + std::to_string(it) +
                               " iterations");
    ++it;
    const VectorField q = apply(p);
    Vec3 pq{};
    for (std::size_t z = 0; z < n; ++z)
      for (int k = 0; k < 3; ++k) pq[k] += p[z][k] * q[z][k];
    for (int k = 0; k < 3; ++k) {
      if (!active[k]) continue;
      if (!(pq[k] > 0.0))
        throw LinearSolveFailure(
            "substep operator is not positive definite (negative curvature direction); "
            "the time step is too large for the current multiplier");
      const double alpha = rr[k] / pq[k];
      double rr_new = 0.0;
      for (std::size_t z = 0; z < n; ++z) {
        x[z][k] += alpha * p[z][k];
        r[z][k] -= alpha * q[z][k];
        rr_new += r[z][k] * r[z][k];
      }
      const double beta = rr_new / rr[k];
      rr[k] = rr_new;
      for (std::size_t z = 0; z < n; ++z) p[z][k] = r[z][k] + beta * p[z][k];
      active[k] = std::sqrt(rr[k]) > tol * bnorm[k];
    }
  }
  if (stats) {
    stats->iterations = it;
    for (int k = 0; k < 3; ++k)
      stats->relative_residual[k] = bnorm[k] > 0.0 ? std::sqrt(rr[k]) / bnorm[k] : 0.0;
  }
  return x;
}

/// Right-hand side of the substep system for a frozen multiplier.
inline VectorField substep_rhs(const Mesh& mesh, const SimState& state,
                               const ScalarField& lambda, const SchemeParams& params) {
  const bool conservative = params.variant.kind == VariantKind::Conservative;
  const VectorField& u_old = conservative ? state.u_prev : state.u_curr;
  const VectorField w_old = conservative ? negative_laplacian(mesh, state.u_prev) : state.w_curr;
  const VectorField f_old = elastic_force(mesh, w_old, params);
  const double tau = params.tau;
  VectorField rhs(mesh);
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
    const double beta = mesh.lumped_weight(z);
    rhs[z] = (beta / tau) * (2.0 * state.u_curr[z] - state.u_prev[z]) - (0.5 * tau) * f_old[z] +
             (0.5 * tau * beta * lambda[z]) * u_old[z];
  }
  return rhs;
}

/// Solves the substep system for a given right-hand side. Dirichlet nodes take
/// their prescribed values; `guess` seeds the iteration.
inline VectorField solve_substep_system(const Mesh& mesh, const ScalarField& lambda,
                                        const VectorField& rhs, const SchemeParams& params,
                                        const VectorField& guess,
                                        LinearSolveStats* stats = nullptr) {
  require_on_mesh(mesh, rhs);
  require_on_mesh(mesh, guess);
  const SubstepOperator op(mesh, params, lambda);
  auto apply = [&op](const VectorField& x) { return op.apply(x); };
  if (!params.bc.dirichlet())
    return conjugate_gradient(apply, rhs, guess, params.linear_tolerance,
                              params.linear_max_iters, stats);

  // Lift the boundary data and solve for the interior correction.
  VectorField lift(mesh);
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z)
    if (mesh.boundary_node(z)) lift[z] = params.bc.values[z];
  VectorField b = op.restrict(rhs - op.apply_full(lift));
  VectorField x = conjugate_gradient(apply, b, op.restrict(guess), params.linear_tolerance,
                                     params.linear_max_iters, stats);
  return x + lift;
}

/// One linear substep: solve with lambda frozen, warm-started from `guess`.
inline VectorField linear_substep(const Mesh& mesh, const SimState& state,
                                  const ScalarField& lambda, const SchemeParams& params,
                                  const VectorField& guess, LinearSolveStats* stats = nullptr) {
  return solve_substep_system(mesh, lambda, substep_rhs(mesh, state, lambda, params), params,
                              guess, stats);
}

inline VectorField linear_substep(const Mesh& mesh, const SimState& state,
                                  const ScalarField& lambda, const SchemeParams& params) {
  return linear_substep(mesh, state, lambda, params, state.u_curr);
}

struct FixedPointReport {
  int iterations{0};
  double final_increment{0.0};
  long cg_iterations_total{0};
  bool converged{false};
  std::vector<double> increments;

  /// Whether the last five increments decrease monotonically (diagnostic only).
  bool tail_monotone() const {
    const std::size_t n = increments.size();
    const std::size_t from = n > 5 ? n - 5 : 0;
    for (std::size_t i = from + 1; i < n; ++i)
      if (increments[i] > increments[i - 1]) return false;
    return true;
  }
};

struct FixedPointResult {
  VectorField u_next;
  VectorField w_next;
  FixedPointReport report;
};

inline FixedPointResult fixed_point_step(const Mesh& mesh, const SimState& state,
                                         const SchemeParams& params) {
  FixedPointResult out;
  auto& rep = out.report;
  VectorField u_star = state.u_curr;

  for (int l = 0; l < params.fp_max_iters; ++l) {
    const ScalarField lambda = lambda_multiplier(mesh, state, u_star, params);
    LinearSolveStats ls;
    VectorField u_new = linear_substep(mesh, state, lambda, params, u_star, &ls);
    rep.cg_iterations_total += ls.iterations;
    rep.iterations = l + 1;

    const double inc = max_nodal_distance(u_new, u_star);
    rep.increments.push_back(inc);
    rep.final_increment = inc;
    if (!std::isfinite(inc)) break;

    VectorField projected = project_to_sphere(u_new);
    if (params.bc.dirichlet())
      for (std::size_t z = 0; z < mesh.num_nodes(); ++z)
        if (mesh.boundary_node(z)) projected[z] = params.bc.values[z];
    projected.mark_sphere_valued();

    if (inc <= params.fp_tolerance) {
      rep.converged = true;
      out.w_next = negative_laplacian(mesh, projected);
      out.u_next = std::move(projected);
      return out;
    }
    u_star = std::move(projected);
  }

  const std::size_t n = rep.increments.size();
  std::vector<double> tail(rep.increments.begin() + static_cast<long>(n > 5 ? n - 5 : 0),
                           rep.increments.end());
  throw NonConvergence("fixed-point iteration did not reach tolerance after " +
                           std::to_string(rep.iterations) + " iterations (last increment " +
                           std::to_string(rep.final_increment) + ")",
                       std::move(tail));
}

}  // namespace biwave
