#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "biwave/errors.hpp"
#include "biwave/mesh.hpp"
#include "biwave/vec3.hpp"

namespace biwave {

/// One value per mesh node. T is double (scalar fields) or Vec3.
template <class T>
class NodalField {
 public:
  using value_type = T;

  NodalField() = default;
  explicit NodalField(std::size_t n, T fill = T{}) : values_(n, fill) {}
  explicit NodalField(const Mesh& mesh, T fill = T{}) : values_(mesh.num_nodes(), fill) {}
  explicit NodalField(std::vector<T> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  T& operator[](std::size_t z) { return values_[z]; }
  const T& operator[](std::size_t z) const { return values_[z]; }
  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }
  const std::vector<T>& values() const { return values_; }

  /// Set by code that has just normalised every nodal value.
  bool sphere_valued() const { return sphere_valued_; }
  void mark_sphere_valued(bool flag = true) { sphere_valued_ = flag; }

  NodalField& operator+=(const NodalField& o) {
    require_same_size(o);
    for (std::size_t z = 0; z < size(); ++z) values_[z] += o.values_[z];
    sphere_valued_ = false;
    return *this;
  }
  NodalField& operator-=(const NodalField& o) {
    require_same_size(o);
    for (std::size_t z = 0; z < size(); ++z) values_[z] -= o.values_[z];
    sphere_valued_ = false;
    return *this;
  }
  NodalField& operator*=(double s) {
    for (auto& v : values_) v *= s;
    sphere_valued_ = false;
    return *this;
  }

  friend NodalField operator+(NodalField a, const NodalField& b) { return a += b; }
  friend NodalField operator-(NodalField a, const NodalField& b) { return a -= b; }
  friend NodalField operator*(double s, NodalField a) { return a *= s; }

  friend bool operator==(const NodalField& a, const NodalField& b) {
    return a.values_ == b.values_;
  }

  void require_same_size(const NodalField& o) const {
    if (o.size() != size())
      throw MeshMismatch("field sizes differ: " + std::to_string(size()) + " vs " +
                         std::to_string(o.size()));
  }

 private:
  std::vector<T> values_;
  bool sphere_valued_{false};
};

using VectorField = NodalField<Vec3>;
using ScalarField = NodalField<double>;

template <class T>
void require_on_mesh(const Mesh& mesh, const NodalField<T>& f) {
  if (f.size() != mesh.num_nodes())
    throw MeshMismatch("field has " + std::to_string(f.size()) + " values, mesh has " +
                       std::to_string(mesh.num_nodes()) + " nodes");
}

/// Component k of a vector field as a scalar field.
inline ScalarField component(const VectorField& u, int k) {
  ScalarField s(u.size());
  for (std::size_t z = 0; z < u.size(); ++z) s[z] = u[z][k];
  return s;
}

/// max_z | |u(z)| - 1 |
inline double constraint_violation(const VectorField& u) {
  double m = 0.0;
  for (const auto& v : u) m = std::max(m, std::abs(norm(v) - 1.0));
  return m;
}

/// max_z |a(z) - b(z)| in the Euclidean norm of R^3.
inline double max_nodal_distance(const VectorField& a, const VectorField& b) {
  a.require_same_size(b);
  double m = 0.0;
  for (std::size_t z = 0; z < a.size(); ++z) m = std::max(m, norm(a[z] - b[z]));
  return m;
}

}  // namespace biwave
