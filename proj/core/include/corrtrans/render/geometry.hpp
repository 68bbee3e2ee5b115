#pragma once

#include <limits>
#include <optional>
#include <variant>

#include "corrtrans/vec.hpp"

namespace corrtrans::render {

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length

  Vec3 at(double t) const noexcept { return origin + direction * t; }
};

struct Sphere {
  Vec3 center;
  double radius = 1.0;
};

struct Box {
  Vec3 lo{-1.0, -1.0, -1.0};
  Vec3 hi{1.0, 1.0, 1.0};
};

struct Plane {
  Vec3 point;
  Vec3 normal{0.0, 1.0, 0.0};  // unit length
};

/// Parallelogram corner + s u + t v, s, t in [0, 1]; normal along u x v.
struct Rect {
  Vec3 corner;
  Vec3 u{1.0, 0.0, 0.0};
  Vec3 v{0.0, 0.0, 1.0};

  Vec3 normal() const noexcept { return normalize(cross(u, v)); }
  double area() const noexcept { return length(cross(u, v)); }
};

using Shape = std::variant<Sphere, Box, Plane, Rect>;

struct SurfaceHit {
  double t = std::numeric_limits<double>::infinity();
  /// Outward geometric normal.
  Vec3 normal;
  /// True when the ray arrives from outside (dot(direction, normal) < 0).
  bool front_face = true;
};

/// Nearest intersection with t in (t_min, t_max).
std::optional<SurfaceHit> intersect(const Shape& shape, const Ray& ray, double t_min, double t_max);

/// Strict interior test; planes and rects have no interior.
bool contains(const Shape& shape, const Vec3& p);

/// True for shapes that bound a volume (sphere, box).
bool is_closed(const Shape& shape);

}  // namespace corrtrans::render
