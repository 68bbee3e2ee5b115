#include "corrtrans/render/medium.hpp"

#include <stdexcept>

namespace corrtrans::render {

ChannelModels::ChannelModels(const ExtinctionModel& gray)
    : models_{gray, gray, gray}, samplers_{FlightSampler(gray), FlightSampler(gray), FlightSampler(gray)}, gray_(true) {}

ChannelModels::ChannelModels(const std::array<ExtinctionModel, 3>& rgb)
    : models_(rgb),
      samplers_{FlightSampler(rgb[0]), FlightSampler(rgb[1]), FlightSampler(rgb[2])},
      gray_(rgb[0] == rgb[1] && rgb[1] == rgb[2]) {}

Rgb ChannelModels::transmittance(double t) const {
  if (gray_) return Rgb(models_[0].transmittance(t));
  return {models_[0].transmittance(t), models_[1].transmittance(t), models_[2].transmittance(t)};
}

Rgb ChannelModels::mean_extinction() const {
  return {models_[0].mean_extinction(), models_[1].mean_extinction(), models_[2].mean_extinction()};
}

const ChannelModels& CorrelatedMedium::models(const OriginClass& c) const {
  if (c.kind == OriginClass::Kind::Scattered) return scattered;
  if (c.light >= 0) {
    const auto it = light_models.find(c.light);
    if (it != light_models.end()) return it->second;
  }
  return source;
}

ExtinctionModel CorrelatedMedium::directional_model(const Vec3& dir) const {
  if (!ellipsoid) throw std::logic_error("medium has no variance ellipsoid");
  const ExtinctionModel& base = scattered.model(0);
  if (const auto* g = base.get_if<GammaConcentrationModel>()) {
    return ellipsoid->model_along(dir, g->mean_concentration, g->cross_section);
  }
  return ellipsoid->model_along(dir, base.mean_extinction(), 1.0);
}

void CorrelatedMedium::validate() const {
  for (int c = 0; c < 3; ++c) {
    if (!(albedo[c] >= 0.0 && albedo[c] <= 1.0)) throw std::domain_error("medium " + name + ": albedo must lie in [0, 1]");
  }
  auto check = [&](const ChannelModels& m) {
    if (!m.gray()) {
      for (int c = 0; c < 3; ++c) {
        if (m.model(c).get_if<MixtureModel>()) {
          throw std::domain_error("medium " + name + ": mixtures must be gray (same model on all channels)");
        }
      }
    }
  };
  check(scattered);
  check(source);
  for (const auto& [light, m] : light_models) check(m);
  if (ellipsoid) {
    const ExtinctionModel& base = scattered.model(0);
    if (!scattered.gray() || !(base.get_if<GammaConcentrationModel>() || base.get_if<ExponentialModel>())) {
      throw std::domain_error("medium " + name + ": an ellipsoid needs a gray exponential or gamma model");
    }
  }
}

}  // namespace corrtrans::render
