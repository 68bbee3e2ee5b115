#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "corrtrans/free_flight.hpp"
#include "corrtrans/render/medium.hpp"
#include "corrtrans/render/scene.hpp"
#include "corrtrans/rng.hpp"

namespace corrtrans::render {

struct FlightEvent {
  double t = 0.0;
  bool reached_boundary = false;
  Rgb weight{1.0};
};

struct ScatterEvent {
  Rgb albedo{1.0};
  PhaseDescriptor phase;
};

/// How free flights, transmittance and scattering are evaluated inside a medium.
class TransportPolicy {
public:
  virtual ~TransportPolicy() = default;

  /// Free flight starting at an event (t = 0) toward a surface at t_boundary.
  virtual FlightEvent sample_flight(const CorrelatedMedium& m, const OriginClass& c, const Vec3& dir,
                                    double t_boundary, Rng& rng) const = 0;
  /// Transmittance of one straight segment that starts at an event.
  virtual Rgb transmittance(const CorrelatedMedium& m, const OriginClass& c, const Vec3& dir, double length) const = 0;
  /// Albedo and phase of a collision after a flight of length t.
  virtual ScatterEvent scatter(const CorrelatedMedium& m, const OriginClass& c, double t, Rng& rng) const = 0;
};

/// Non-exponential transport: origin-class models, t-dependent albedo and
/// phase for mixtures, directional gamma models for media with an ellipsoid.
class CorrelatedTransport final : public TransportPolicy {
public:
  explicit CorrelatedTransport(FlightStrategy strategy = FlightStrategy::Default) : strategy_(strategy) {}

  FlightEvent sample_flight(const CorrelatedMedium& m, const OriginClass& c, const Vec3& dir, double t_boundary,
                            Rng& rng) const override;
  Rgb transmittance(const CorrelatedMedium& m, const OriginClass& c, const Vec3& dir, double length) const override;
  ScatterEvent scatter(const CorrelatedMedium& m, const OriginClass& c, double t, Rng& rng) const override;

private:
  FlightStrategy strategy_;
};

/// Classic exponential transport with the scattered-class mean extinction
/// per channel, written independently of the extinction-model code.
class ClassicTransport final : public TransportPolicy {
public:
  FlightEvent sample_flight(const CorrelatedMedium& m, const OriginClass& c, const Vec3& dir, double t_boundary,
                            Rng& rng) const override;
  Rgb transmittance(const CorrelatedMedium& m, const OriginClass& c, const Vec3& dir, double length) const override;
  ScatterEvent scatter(const CorrelatedMedium& m, const OriginClass& c, double t, Rng& rng) const override;
};

struct PathState {
  Vec3 position;
  Vec3 direction;
  /// Distance travelled since the last event (scattering, surface, boundary, emission).
  double t_since_event = 0.0;
  OriginClass origin;
  Rgb throughput{1.0};
  int depth = 0;
  int medium = -1;
};

enum class PathEvent { Scatter, Surface, Boundary, Escape, Absorb };

/// Instrumentation hooks; calls arrive in path order from the rendering thread.
class PathObserver {
public:
  virtual ~PathObserver() = default;
  /// Start of a free flight inside a medium.
  virtual void on_flight(const PathState&) {}
  /// An event, reported with the state before any reset.
  virtual void on_event(PathEvent, const PathState&) {}
};

struct TraceStats {
  std::uint64_t paths = 0;
  std::uint64_t non_finite = 0;
  std::uint64_t scatter_events = 0;
};

inline constexpr int kRouletteDepth = 16;

/// One radiance estimate along a camera ray.
Rgb trace_path(const Scene& scene, const TransportPolicy& policy, const Ray& camera_ray, Rng& rng,
               TraceStats* stats = nullptr, PathObserver* observer = nullptr);

/// Next-event estimate from a scattering vertex in medium `medium`.
Rgb next_event_medium(const Scene& scene, const TransportPolicy& policy, const Vec3& p, const Vec3& incoming,
                      const PhaseDescriptor& phase, int medium, Rng& rng);

/// Light arriving at p from light `light` along a sampled connection, times
/// the transmittance of every medium segment, before the phase/BSDF factor.
struct LightConnection {
  Vec3 direction;
  Rgb radiance;
};
std::optional<LightConnection> connect_light(const Scene& scene, const TransportPolicy& policy, const Vec3& p,
                                             int medium, int light, Rng& rng);

/// Visibility times transmittance from p to a point `distance` away along dir,
/// using light `light`'s source-class models. Opaque and dielectric surfaces block.
Rgb shadow_transmittance(const Scene& scene, const TransportPolicy& policy, Vec3 p, const Vec3& dir, double distance,
                         int medium, int light);

struct CropWindow {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t width = 0;
  std::size_t height = 0;
};

struct RenderOptions {
  std::size_t spp = 16;
  std::uint64_t seed = 1;
  /// 0 resolves through CORRTRANS_WORKERS, then the hardware concurrency.
  unsigned workers = 0;
  std::optional<CropWindow> crop;
};

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgb> pixels;

  Image() = default;
  Image(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h) {}
  Rgb& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  const Rgb& at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
  Rgb mean() const;
  bool operator==(const Image&) const = default;
};

/// Pixel (x, y) of the full frame draws from stream (seed, y * width + x), so
/// the image does not depend on workers or tiling. spp samples are jittered
/// in a floor(sqrt(spp))^2 grid, the remainder uniformly.
Image render(const Scene& scene, const TransportPolicy& policy, const RenderOptions& options,
             TraceStats* stats = nullptr, PathObserver* observer = nullptr);

}  // namespace corrtrans::render
