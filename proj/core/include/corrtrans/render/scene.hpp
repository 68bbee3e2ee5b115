#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "corrtrans/render/geometry.hpp"
#include "corrtrans/render/medium.hpp"
#include "corrtrans/vec.hpp"

namespace corrtrans::render {

struct Camera {
  Vec3 position{0.0, 0.0, -5.0};
  Vec3 look_at{0.0, 0.0, 0.0};
  Vec3 up{0.0, 1.0, 0.0};
  /// Vertical field of view in degrees.
  double fov = 30.0;
  std::size_t width = 64;
  std::size_t height = 64;

  /// Ray through image position (x, y) in pixels, y pointing down.
  Ray generate_ray(double x, double y) const;
};

struct Material {
  /// None marks an index-matched boundary that only delimits a medium.
  enum class Kind { None, Lambertian, Dielectric };
  Kind kind = Kind::None;
  Rgb albedo{0.8};
  double ior = 1.5;
};

struct Primitive {
  Shape shape;
  Material material;
  /// Medium inside a closed shape, -1 for none.
  int medium = -1;
};

struct PointLight {
  Vec3 position;
  Rgb intensity{1.0};
};

/// One-sided emitter; emits along rect.normal().
struct AreaLight {
  Rect rect;
  Rgb radiance{1.0};
};

struct Light {
  std::string name;
  std::variant<PointLight, AreaLight> emitter;
};

/// Declared contact between two media with their cross-correlation.
struct MediumInterface {
  int a = -1;
  int b = -1;
  double c12 = 0.0;
};

struct SceneHit {
  SurfaceHit surface;
  int primitive = -1;
  /// Area light index when an emitter was hit.
  int light = -1;
};

struct Scene {
  Camera camera;
  std::vector<CorrelatedMedium> media;
  std::vector<Primitive> primitives;
  std::vector<Light> lights;
  std::vector<MediumInterface> interfaces;
  Rgb background{0.0};

  /// Nearest primitive or area-light hit with t in (t_min, t_max).
  std::optional<SceneHit> intersect(const Ray& ray, double t_min, double t_max, bool include_lights = true) const;

  /// Medium of the first closed primitive that strictly contains p, skipping `exclude`.
  int medium_at(const Vec3& p, int exclude = -1) const;

  int find_medium(const std::string& name) const;
  int find_light(const std::string& name) const;

  /// Throws std::domain_error for invalid media, media inside opaque
  /// primitives, media on open shapes, or interfaces with c12 != 0.
  void validate() const;
};

/// Concentration variance set to 0 in every gamma model (the exponential limit
/// with the same mean), including mixture components; ellipsoids are dropped.
/// Linear and path-length models are left as they are.
ExtinctionModel with_zero_variance(const ExtinctionModel& model);
Scene with_zero_variance(Scene scene);

}  // namespace corrtrans::render
