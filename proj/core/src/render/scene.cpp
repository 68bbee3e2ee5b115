#include "corrtrans/render/scene.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace corrtrans::render {

Ray Camera::generate_ray(double x, double y) const {
  const Vec3 forward = normalize(look_at - position);
  const Vec3 right = normalize(cross(up, forward));
  const Vec3 true_up = cross(forward, right);
  const double tan_half = std::tan(0.5 * fov * std::numbers::pi / 180.0);
  const double aspect = static_cast<double>(width) / static_cast<double>(height);
  const double sx = (2.0 * x / static_cast<double>(width) - 1.0) * aspect * tan_half;
  const double sy = (1.0 - 2.0 * y / static_cast<double>(height)) * tan_half;
  return {position, normalize(forward + right * sx + true_up * sy)};
}

std::optional<SceneHit> Scene::intersect(const Ray& ray, double t_min, double t_max, bool include_lights) const {
  std::optional<SceneHit> best;
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    if (auto h = render::intersect(primitives[i].shape, ray, t_min, t_max)) {
      t_max = h->t;
      best = SceneHit{*h, static_cast<int>(i), -1};
    }
  }
  if (include_lights) {
    for (std::size_t i = 0; i < lights.size(); ++i) {
      const auto* area = std::get_if<AreaLight>(&lights[i].emitter);
      if (!area) continue;
      if (auto h = render::intersect(area->rect, ray, t_min, t_max)) {
        t_max = h->t;
        best = SceneHit{*h, -1, static_cast<int>(i)};
      }
    }
  }
  return best;
}

int Scene::medium_at(const Vec3& p, int exclude) const {
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    if (static_cast<int>(i) == exclude || primitives[i].medium < 0) continue;
    if (contains(primitives[i].shape, p)) return primitives[i].medium;
  }
  return -1;
}

int Scene::find_medium(const std::string& name) const {
  for (std::size_t i = 0; i < media.size(); ++i) {
    if (media[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int Scene::find_light(const std::string& name) const {
  for (std::size_t i = 0; i < lights.size(); ++i) {
    if (lights[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

void Scene::validate() const {
  if (camera.width == 0 || camera.height == 0) throw std::domain_error("camera resolution must be positive");
  if (!(camera.fov > 0.0 && camera.fov < 180.0)) throw std::domain_error("camera fov must lie in (0, 180)");
  for (const auto& m : media) m.validate();
  const auto n_media = static_cast<int>(media.size());
  for (const auto& p : primitives) {
    if (p.medium < -1 || p.medium >= n_media) throw std::domain_error("primitive refers to an unknown medium");
    if (p.medium >= 0 && !is_closed(p.shape)) throw std::domain_error("media need a closed shape (sphere or box)");
    if (p.medium >= 0 && p.material.kind == Material::Kind::Lambertian) {
      throw std::domain_error("a medium inside an opaque primitive is unreachable");
    }
    for (int c = 0; c < 3; ++c) {
      if (!(p.material.albedo[c] >= 0.0 && p.material.albedo[c] <= 1.0)) {
        throw std::domain_error("surface albedo must lie in [0, 1]");
      }
    }
    if (p.material.kind == Material::Kind::Dielectric && !(p.material.ior > 0.0)) {
      throw std::domain_error("index of refraction must be positive");
    }
  }
  for (const auto& i : interfaces) {
    if (i.a < 0 || i.a >= n_media || i.b < 0 || i.b >= n_media) throw std::domain_error("interface refers to an unknown medium");
    if (i.c12 != 0.0) {
      throw std::domain_error(
          "medium-to-medium interfaces with nonzero cross-correlation are not supported: "
          "a general solution for correlated heterogeneous media is an open problem; use c12 = 0");
    }
  }
}

ExtinctionModel with_zero_variance(const ExtinctionModel& model) {
  if (const auto* g = model.get_if<GammaConcentrationModel>()) {
    return ExtinctionModel::gamma_concentration(g->mean_concentration, 0.0, g->cross_section);
  }
  if (const auto* mix = model.get_if<MixtureModel>()) {
    MixtureModel out = *mix;
    for (auto& c : out.components) c.model = with_zero_variance(c.model);
    return ExtinctionModel(std::move(out));
  }
  return model;
}

namespace {

ChannelModels zero_variance_channels(const ChannelModels& cm) {
  if (cm.gray()) return ChannelModels(with_zero_variance(cm.model(0)));
  return ChannelModels(std::array<ExtinctionModel, 3>{with_zero_variance(cm.model(0)), with_zero_variance(cm.model(1)),
                                                      with_zero_variance(cm.model(2))});
}

}  // namespace

Scene with_zero_variance(Scene scene) {
  for (auto& m : scene.media) {
    m.scattered = zero_variance_channels(m.scattered);
    m.source = zero_variance_channels(m.source);
    for (auto& [light, cm] : m.light_models) cm = zero_variance_channels(cm);
    m.ellipsoid.reset();
  }
  return scene;
}

}  // namespace corrtrans::render
