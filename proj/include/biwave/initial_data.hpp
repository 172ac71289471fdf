#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "biwave/errors.hpp"
#include "biwave/field.hpp"
#include "biwave/mesh.hpp"
#include "biwave/operators.hpp"

namespace biwave {

enum class InitialKind { Bubble2D, Singular2D, Smooth1D, FromFile };

inline std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Bubble2D: return "bubble";
    case InitialKind::Singular2D: return "singular";
    case InitialKind::Smooth1D: return "smooth1d";
    case InitialKind::FromFile: return "file";
  }
  return "?";
}

struct InitialData {
  VectorField u0;
  VectorField v0;
};

/// Bubble datum on (-1,1)^2; the far-field value (0,0,-1) is used for |x| >= 1/2.
inline Vec3 bubble_value(const Point& x) {
  const double r2 = x[0] * x[0] + x[1] * x[1];
  const double r = std::sqrt(r2);
  if (r >= 0.5) return {0.0, 0.0, -1.0};
  const double a = std::pow(1.0 - 4.0 * r, 4);
  const double den = a * a + 4.0 * r2;
  return {4.0 * x[0] * a / den, 4.0 * x[1] * a / den, (a * a - 4.0 * r2) / den};
}

/// The |x| <= 1/2 branch of the bubble datum, without the far-field switch.
inline Vec3 bubble_inner_branch(const Point& x) {
  const double r2 = x[0] * x[0] + x[1] * x[1];
  const double a = std::pow(1.0 - 4.0 * std::sqrt(r2), 4);
  const double den = a * a + 4.0 * r2;
  return {4.0 * x[0] * a / den, 4.0 * x[1] * a / den, (a * a - 4.0 * r2) / den};
}

/// (cos theta, sin theta, 0) with theta = 2 pi f (x + 1) / 2.
inline Vec3 smooth_curve_value(const Point& x, int frequency) {
  const double theta = std::numbers::pi * frequency * (x[0] + 1.0);
  return {std::cos(theta), std::sin(theta), 0.0};
}

/// x / |x| in the plane, used as Dirichlet data of the singular experiment.
inline Vec3 radial_value(const Point& x) {
  const double r = std::hypot(x[0], x[1]);
  return {x[0] / r, x[1] / r, 0.0};
}

inline InitialData builtin_initial(InitialKind kind, const Mesh& mesh, int frequency = 1) {
  InitialData d;
  d.v0 = VectorField(mesh);
  switch (kind) {
    case InitialKind::Bubble2D:
      if (mesh.dim() != 2) throw ConfigError("bubble initial data needs a 2D mesh");
      d.u0 = nodal_interpolate(mesh, bubble_value);
      break;
    case InitialKind::Singular2D:
      if (mesh.dim() != 2) throw ConfigError("singular initial data needs a 2D mesh");
      d.u0 = VectorField(mesh, Vec3{1.0, 0.0, 0.0});
      for (std::size_t z = 0; z < mesh.num_nodes(); ++z)
        if (mesh.boundary_node(z)) {
          const Vec3 v = radial_value(mesh.node(z));
          if (!std::isfinite(v[0]) || !std::isfinite(v[1]))
            throw InterpolationError(z, "x/|x| undefined at the origin");
          d.u0[z] = v;
        }
      break;
    case InitialKind::Smooth1D:
      if (mesh.dim() != 1) throw ConfigError("smooth1d initial data needs a 1D mesh");
      d.u0 = nodal_interpolate(mesh,
                               [frequency](const Point& x) { return smooth_curve_value(x, frequency); });
      break;
    case InitialKind::FromFile:
      throw ConfigError("builtin_initial: file data must be read with read_field_snapshot");
  }
  d.u0.mark_sphere_valued();
  return d;
}

}  // namespace biwave
