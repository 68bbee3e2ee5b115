#pragma once

#include <array>
#include <cmath>

namespace corrtrans {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const noexcept { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const noexcept { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const noexcept { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int i) const noexcept { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) noexcept { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator-() const noexcept { return {-x, -y, -z}; }
  constexpr Vec3 operator+(const Vec3& o) const noexcept { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const noexcept { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const noexcept { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const noexcept { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) noexcept { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) noexcept { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(const Vec3& v) noexcept { return std::sqrt(dot(v, v)); }
inline Vec3 normalize(const Vec3& v) noexcept { return v / length(v); }

/// Orthonormal basis around a unit vector (Duff et al. branchless construction).
inline void make_frame(const Vec3& n, Vec3& t, Vec3& b) noexcept {
  const double sign = std::copysign(1.0, n.z);
  const double a = -1.0 / (sign + n.z);
  const double c = n.x * n.y * a;
  t = {1.0 + sign * n.x * n.x * a, sign * c, -sign * n.x};
  b = {c, sign + n.y * n.y * a, -n.y};
}

/// Linear RGB triple used for radiance, throughput and albedo.
struct Rgb {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  constexpr Rgb() = default;
  constexpr explicit Rgb(double v) noexcept : c{v, v, v} {}
  constexpr Rgb(double r, double g, double b) noexcept : c{r, g, b} {}

  constexpr double operator[](int i) const noexcept { return c[static_cast<std::size_t>(i)]; }
  constexpr double& operator[](int i) noexcept { return c[static_cast<std::size_t>(i)]; }

  constexpr Rgb operator+(const Rgb& o) const noexcept { return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2]}; }
  constexpr Rgb operator*(const Rgb& o) const noexcept { return {c[0] * o.c[0], c[1] * o.c[1], c[2] * o.c[2]}; }
  constexpr Rgb operator*(double s) const noexcept { return {c[0] * s, c[1] * s, c[2] * s}; }
  constexpr Rgb operator/(double s) const noexcept { return {c[0] / s, c[1] / s, c[2] / s}; }
  constexpr Rgb& operator+=(const Rgb& o) noexcept { c[0] += o.c[0]; c[1] += o.c[1]; c[2] += o.c[2]; return *this; }
  constexpr Rgb& operator*=(const Rgb& o) noexcept { c[0] *= o.c[0]; c[1] *= o.c[1]; c[2] *= o.c[2]; return *this; }
  constexpr Rgb& operator*=(double s) noexcept { c[0] *= s; c[1] *= s; c[2] *= s; return *this; }
  constexpr bool operator==(const Rgb&) const = default;

  constexpr double max_component() const noexcept {
    return c[0] > c[1] ? (c[0] > c[2] ? c[0] : c[2]) : (c[1] > c[2] ? c[1] : c[2]);
  }
  constexpr bool is_black() const noexcept { return c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0; }
  bool is_finite() const noexcept {
    return std::isfinite(c[0]) && std::isfinite(c[1]) && std::isfinite(c[2]);
  }
};

constexpr Rgb operator*(double s, const Rgb& v) noexcept { return v * s; }

}  // namespace corrtrans
