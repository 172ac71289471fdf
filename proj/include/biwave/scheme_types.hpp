#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "biwave/errors.hpp"
#include "biwave/field.hpp"
#include "biwave/mesh.hpp"

namespace biwave {

enum class VariantKind { Dissipative, Stabilized, Conservative };

inline std::string to_string(VariantKind k) {
  switch (k) {
    case VariantKind::Dissipative: return "dissipative";
    case VariantKind::Stabilized: return "stabilized";
    case VariantKind::Conservative: return "conservative";
  }
  return "?";
}

/// Which time-stepping scheme to run. alpha and c_stab are read only for Stabilized.
struct SchemeVariant {
  VariantKind kind{VariantKind::Dissipative};
  double alpha{2.0};
  double c_stab{0.0};

  static SchemeVariant dissipative() { return {}; }
  static SchemeVariant stabilized(double alpha, double c_stab) {
    return {VariantKind::Stabilized, alpha, c_stab};
  }
  static SchemeVariant conservative() { return {VariantKind::Conservative, 2.0, 0.0}; }

  /// The convergence analysis covers 0 < alpha < 2 only; alpha = 2 is still admitted.
  bool outside_convergence_theory() const {
    return kind == VariantKind::Stabilized && alpha >= 2.0;
  }
};

enum class BoundaryMode { NaturalNeumann, DirichletU };

struct BoundaryCondition {
  BoundaryMode mode{BoundaryMode::NaturalNeumann};
  /// Prescribed U at boundary nodes (DirichletU only; interior entries ignored).
  VectorField values;

  static BoundaryCondition neumann() { return {}; }
  static BoundaryCondition dirichlet(VectorField values) {
    return {BoundaryMode::DirichletU, std::move(values)};
  }
  bool dirichlet() const { return mode == BoundaryMode::DirichletU; }
  /// True if node z carries an equation (i.e. is not a Dirichlet node).
  bool free_node(const Mesh& mesh, std::size_t z) const {
    return !dirichlet() || !mesh.boundary_node(z);
  }
};

struct SchemeParams {
  SchemeVariant variant{};
  double tau{0.0};
  double fp_tolerance{1e-8};
  int fp_max_iters{500};
  BoundaryCondition bc{};
  double linear_tolerance{1e-12};
  int linear_max_iters{2000};

  /// c_stab h^alpha, with h the grid spacing; zero unless Stabilized.
  double stabilization_weight(const Mesh& mesh) const {
    if (variant.kind != VariantKind::Stabilized || variant.c_stab == 0.0) return 0.0;
    return variant.c_stab * std::pow(mesh.cell_h(), variant.alpha);
  }
};

/// Throws ConfigError if params are unusable on this mesh.
inline void validate(const SchemeParams& p, const Mesh& mesh) {
  if (!(p.tau > 0.0) || !std::isfinite(p.tau)) throw ConfigError("scheme: tau must be > 0");
  if (!(p.fp_tolerance > 0.0)) throw ConfigError("scheme: fp_tolerance must be > 0");
  if (p.fp_max_iters < 1) throw ConfigError("scheme: fp_max_iters must be >= 1");
  if (!(p.linear_tolerance > 0.0)) throw ConfigError("scheme: linear_tolerance must be > 0");
  if (p.linear_max_iters < 1) throw ConfigError("scheme: linear_max_iters must be >= 1");
  if (p.variant.kind == VariantKind::Stabilized) {
    if (!(p.variant.alpha > 0.0 && p.variant.alpha <= 2.0))
      throw ConfigError("scheme: alpha must lie in (0, 2]");
    if (!(p.variant.c_stab >= 0.0)) throw ConfigError("scheme: c_stab must be >= 0");
  }
  if (p.bc.dirichlet()) {
    require_on_mesh(mesh, p.bc.values);
    for (std::size_t z = 0; z < mesh.num_nodes(); ++z)
      if (mesh.boundary_node(z) && std::abs(norm(p.bc.values[z]) - 1.0) > 1e-12)
        throw ConfigError("scheme: Dirichlet value at node " + std::to_string(z) +
                          " is not a unit vector");
  }
}

/// Full time-stepping state at level n.
struct SimState {
  VectorField u_curr;  ///< U^n
  VectorField u_prev;  ///< U^{n-1} (U^{-1} = U^0 - tau V^0 at n = 0)
  VectorField v_curr;  ///< V^n; d_t U^n for n >= 1, the initial velocity at n = 0
  VectorField w_curr;  ///< W^n = -Delta_h U^n
  long step_index{0};
  double time{0.0};
  double damping_accum{0.0};   ///< sum_j (tau^2/2) ||d_t V^j||_h^2
  double initial_energy{0.0};  ///< the variant's reference energy
};

/// Branch taken by the multiplier formula at a node.
enum class MultiplierCase { ZeroMidpoint, FirstStep, Generic };

}  // namespace biwave
