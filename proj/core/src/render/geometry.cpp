#include "corrtrans/render/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace corrtrans::render {

namespace {

template <class... F>
struct Overload : F... {
  using F::operator()...;
};
template <class... F>
Overload(F...) -> Overload<F...>;

std::optional<SurfaceHit> make_hit(double t, Vec3 n, const Ray& ray) {
  SurfaceHit h;
  h.t = t;
  h.normal = n;
  h.front_face = dot(ray.direction, n) < 0.0;
  return h;
}

std::optional<SurfaceHit> hit_sphere(const Sphere& s, const Ray& ray, double t_min, double t_max) {
  const Vec3 oc = ray.origin - s.center;
  const double b = dot(oc, ray.direction);
  const double c = dot(oc, oc) - s.radius * s.radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  // Stable root pair.
  const double q = b > 0.0 ? -b - sq : -b + sq;
  double t0 = q;
  double t1 = q != 0.0 ? c / q : -b;
  if (t0 > t1) std::swap(t0, t1);
  for (double t : {t0, t1}) {
    if (t > t_min && t < t_max) return make_hit(t, (ray.at(t) - s.center) / s.radius, ray);
  }
  return std::nullopt;
}

std::optional<SurfaceHit> hit_box(const Box& b, const Ray& ray, double t_min, double t_max) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  int near_axis = -1;
  int far_axis = -1;
  for (int a = 0; a < 3; ++a) {
    const double d = ray.direction[a];
    if (d == 0.0) {
      if (ray.origin[a] < b.lo[a] || ray.origin[a] > b.hi[a]) return std::nullopt;
      continue;
    }
    double t0 = (b.lo[a] - ray.origin[a]) / d;
    double t1 = (b.hi[a] - ray.origin[a]) / d;
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > t_near) {
      t_near = t0;
      near_axis = a;
    }
    if (t1 < t_far) {
      t_far = t1;
      far_axis = a;
    }
  }
  if (t_near > t_far) return std::nullopt;
  auto normal_for = [&](int axis, double t) {
    Vec3 n;
    const double mid = 0.5 * (b.lo[axis] + b.hi[axis]);
    n[axis] = ray.at(t)[axis] > mid ? 1.0 : -1.0;
    return n;
  };
  if (near_axis >= 0 && t_near > t_min && t_near < t_max) return make_hit(t_near, normal_for(near_axis, t_near), ray);
  if (far_axis >= 0 && t_far > t_min && t_far < t_max) return make_hit(t_far, normal_for(far_axis, t_far), ray);
  return std::nullopt;
}

std::optional<SurfaceHit> hit_plane(const Plane& p, const Ray& ray, double t_min, double t_max) {
  const double denom = dot(p.normal, ray.direction);
  if (denom == 0.0) return std::nullopt;
  const double t = dot(p.point - ray.origin, p.normal) / denom;
  if (!(t > t_min && t < t_max)) return std::nullopt;
  return make_hit(t, p.normal, ray);
}

std::optional<SurfaceHit> hit_rect(const Rect& r, const Ray& ray, double t_min, double t_max) {
  const Vec3 n = cross(r.u, r.v);
  const double denom = dot(n, ray.direction);
  if (denom == 0.0) return std::nullopt;
  const double t = dot(r.corner - ray.origin, n) / denom;
  if (!(t > t_min && t < t_max)) return std::nullopt;
  // Barycentric-style coordinates in the (u, v) frame.
  const Vec3 d = ray.at(t) - r.corner;
  const double nn = dot(n, n);
  const double s = dot(cross(d, r.v), n) / nn;
  const double w = dot(cross(r.u, d), n) / nn;
  if (s < 0.0 || s > 1.0 || w < 0.0 || w > 1.0) return std::nullopt;
  return make_hit(t, n / std::sqrt(nn), ray);
}

}  // namespace

std::optional<SurfaceHit> intersect(const Shape& shape, const Ray& ray, double t_min, double t_max) {
  return std::visit(Overload{
                        [&](const Sphere& s) { return hit_sphere(s, ray, t_min, t_max); },
                        [&](const Box& b) { return hit_box(b, ray, t_min, t_max); },
                        [&](const Plane& p) { return hit_plane(p, ray, t_min, t_max); },
                        [&](const Rect& r) { return hit_rect(r, ray, t_min, t_max); },
                    },
                    shape);
}

bool contains(const Shape& shape, const Vec3& p) {
  if (const auto* s = std::get_if<Sphere>(&shape)) {
    const Vec3 d = p - s->center;
    return dot(d, d) < s->radius * s->radius;
  }
  if (const auto* b = std::get_if<Box>(&shape)) {
    for (int a = 0; a < 3; ++a) {
      if (!(p[a] > b->lo[a] && p[a] < b->hi[a])) return false;
    }
    return true;
  }
  return false;
}

bool is_closed(const Shape& shape) { return std::holds_alternative<Sphere>(shape) || std::holds_alternative<Box>(shape); }

}  // namespace corrtrans::render
