#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace biwave {

/// Point value of a map into R^3.
struct Vec3 {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : c{x, y, z} {}

  constexpr double& operator[](std::size_t k) { return c[k]; }
  constexpr double operator[](std::size_t k) const { return c[k]; }

  constexpr Vec3& operator+=(const Vec3& o) {
    for (std::size_t k = 0; k < 3; ++k) c[k] += o.c[k];
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    for (std::size_t k = 0; k < 3; ++k) c[k] -= o.c[k];
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(Vec3 a) { return a *= -1.0; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

constexpr bool is_zero(const Vec3& a) {
  return a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0;
}

// Scalar overloads so operator templates work for both nodal value types.
constexpr double dot(double a, double b) { return a * b; }
constexpr bool is_zero(double a) { return a == 0.0; }

}  // namespace biwave
