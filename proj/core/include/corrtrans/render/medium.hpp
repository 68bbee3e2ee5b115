#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "corrtrans/free_flight.hpp"
#include "corrtrans/transmittance.hpp"
#include "corrtrans/vec.hpp"

namespace corrtrans::render {

/// One extinction model per RGB channel with its flight sampler.
class ChannelModels {
public:
  ChannelModels() : ChannelModels(ExtinctionModel{}) {}
  explicit ChannelModels(const ExtinctionModel& gray);
  explicit ChannelModels(const std::array<ExtinctionModel, 3>& rgb);

  bool gray() const noexcept { return gray_; }
  const ExtinctionModel& model(int channel) const noexcept { return models_[static_cast<std::size_t>(channel)]; }
  const FlightSampler& sampler(int channel) const noexcept { return samplers_[static_cast<std::size_t>(channel)]; }
  Rgb transmittance(double t) const;
  /// Mean extinction per channel (the classic equal-mean rate).
  Rgb mean_extinction() const;

  bool operator==(const ChannelModels& o) const { return models_ == o.models_; }

private:
  std::array<ExtinctionModel, 3> models_;
  std::array<FlightSampler, 3> samplers_;
  bool gray_ = true;
};

/// Origin class of a free flight: a light source (or anything acting as one:
/// the camera, a medium boundary, a surface) or a scattering event.
struct OriginClass {
  enum class Kind { Source, Scattered };
  Kind kind = Kind::Source;
  /// Light index for connections toward a specific light, -1 otherwise.
  int light = -1;

  static OriginClass source(int light = -1) noexcept { return {Kind::Source, light}; }
  static OriginClass scattered() noexcept { return {Kind::Scattered, -1}; }
  bool operator==(const OriginClass&) const = default;
};

struct CorrelatedMedium {
  std::string name;
  ChannelModels scattered;
  /// Camera rays, boundary entries and surface interactions.
  ChannelModels source;
  /// Connections toward a light (keyed by light index); default `source`.
  std::map<int, ChannelModels> light_models;
  Rgb albedo{1.0};
  PhaseDescriptor phase;
  /// When set, every class uses the gamma model along the flight direction
  /// built from the scattered model's mean concentration and cross-section.
  std::optional<DirectionalVariance> ellipsoid;

  /// Model set for a class; ignores the ellipsoid.
  const ChannelModels& models(const OriginClass& c) const;

  /// Gray directional model along `dir` (requires the ellipsoid).
  ExtinctionModel directional_model(const Vec3& dir) const;

  /// Throws std::domain_error for albedo outside [0, 1], chromatic mixtures
  /// or an ellipsoid without a gray exponential/gamma scattered model.
  void validate() const;
};

}  // namespace corrtrans::render
