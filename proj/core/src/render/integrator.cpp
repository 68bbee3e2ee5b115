#include "corrtrans/render/integrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

#include "corrtrans/parallel.hpp"
#include "corrtrans/render/phase.hpp"

namespace corrtrans::render {

namespace {

constexpr double kEpsilon = 1e-6;
constexpr int kMaxEvents = 1 << 16;
constexpr std::size_t kTile = 16;

int pick_channel(Rng& rng) { return std::min(2, static_cast<int>(3.0 * rng.uniform())); }

// Medium on the far side of primitive `index` for a ray crossing it at p.
int medium_after(const Scene& scene, int index, const SurfaceHit& hit, const Vec3& p, const Vec3& dir, int current) {
  const Primitive& prim = scene.primitives[static_cast<std::size_t>(index)];
  if (prim.medium < 0) return current;
  if (hit.front_face) return prim.medium;
  return scene.medium_at(p + dir * kEpsilon, index);
}

Vec3 cosine_hemisphere(const Vec3& n, Rng& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double r = std::sqrt(u1);
  const double phi = 2.0 * std::numbers::pi * u2;
  Vec3 t;
  Vec3 b;
  make_frame(n, t, b);
  return normalize(t * (r * std::cos(phi)) + b * (r * std::sin(phi)) + n * std::sqrt(std::max(0.0, 1.0 - u1)));
}

double fresnel_dielectric(double cos_i, double cos_t, double eta) {
  // eta = n_incident / n_transmitted
  const double rs = (eta * cos_i - cos_t) / (eta * cos_i + cos_t);
  const double rp = (cos_i - eta * cos_t) / (cos_i + eta * cos_t);
  return 0.5 * (rs * rs + rp * rp);
}

bool roulette(Rgb& beta, int depth, Rng& rng) {
  if (depth <= kRouletteDepth) return true;
  const double q = std::min(1.0, beta.max_component());
  if (rng.uniform() >= q) return false;
  beta = beta / q;
  return true;
}

}  // namespace

// ---- policies ---------------------------------------------------------------

FlightEvent CorrelatedTransport::sample_flight(const CorrelatedMedium& m, const OriginClass& c, const Vec3& dir,
                                               double t_boundary, Rng& rng) const {
  if (m.ellipsoid) {
    const FlightSampler sampler(m.directional_model(dir), strategy_);
    const DistanceSample s = sampler.sample(rng, t_boundary);
    return {s.t, s.reached_boundary, Rgb(s.weight)};
  }
  const ChannelModels& models = m.models(c);
  if (models.gray()) {
    const DistanceSample s = strategy_ == FlightStrategy::Default
                                 ? models.sampler(0).sample(rng, t_boundary)
                                 : FlightSampler(models.model(0), strategy_).sample(rng, t_boundary);
    return {s.t, s.reached_boundary, Rgb(s.weight)};
  }
  // Chromatic: sample one channel, weight every channel by the one-sample
  // balance heuristic over the three channel samplers.
  const int hero = pick_channel(rng);
  const DistanceSample s = models.sampler(hero).sample(rng, t_boundary);
  Rgb f;
  Rgb q;
  for (int k = 0; k < 3; ++k) {
    if (s.reached_boundary) {
      f[k] = models.model(k).transmittance(t_boundary);
      q[k] = models.sampler(k).survival(t_boundary);
    } else {
      f[k] = models.model(k).extinction_prob(s.t);
      q[k] = models.sampler(k).pdf(s.t);
    }
  }
  const double avg = (q[0] + q[1] + q[2]) / 3.0;
  return {s.t, s.reached_boundary, avg > 0.0 ? f / avg : Rgb(0.0)};
}

Rgb CorrelatedTransport::transmittance(const CorrelatedMedium& m, const OriginClass& c, const Vec3& dir,
                                       double length) const {
  if (m.ellipsoid) return Rgb(m.directional_model(dir).transmittance(length));
  return m.models(c).transmittance(length);
}

ScatterEvent CorrelatedTransport::scatter(const CorrelatedMedium& m, const OriginClass& c, double t, Rng& rng) const {
  ScatterEvent e{m.albedo, m.phase};
  if (m.ellipsoid) return e;
  const auto* mix = m.models(c).model(0).get_if<MixtureModel>();
  if (!mix) return e;
  const MixtureEvaluator ev(*mix);
  e.albedo = m.albedo * ev.albedo(t);
  const std::vector<double> w = ev.phase_weights(t);
  double u = rng.uniform();
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] <= 0.0) continue;
    e.phase = mix->components[k].phase;
    if (u < w[k]) break;
    u -= w[k];
  }
  return e;
}

FlightEvent ClassicTransport::sample_flight(const CorrelatedMedium& m, const OriginClass&, const Vec3&,
                                            double t_boundary, Rng& rng) const {
  const Rgb mu = m.scattered.mean_extinction();
  if (mu[0] == mu[1] && mu[1] == mu[2]) {
    const double t = -std::log1p(-rng.uniform()) / mu[0];
    if (t >= t_boundary) return {t_boundary, true, Rgb(1.0)};
    return {t, false, Rgb(1.0)};
  }
  const int hero = pick_channel(rng);
  const double t = -std::log1p(-rng.uniform()) / mu[hero];
  const bool boundary = t >= t_boundary;
  Rgb f;
  for (int k = 0; k < 3; ++k) f[k] = boundary ? std::exp(-mu[k] * t_boundary) : mu[k] * std::exp(-mu[k] * t);
  const double avg = (f[0] + f[1] + f[2]) / 3.0;
  return {boundary ? t_boundary : t, boundary, avg > 0.0 ? f / avg : Rgb(0.0)};
}

Rgb ClassicTransport::transmittance(const CorrelatedMedium& m, const OriginClass&, const Vec3&, double length) const {
  const Rgb mu = m.scattered.mean_extinction();
  if (mu[0] == mu[1] && mu[1] == mu[2]) return Rgb(std::exp(-mu[0] * length));
  return {std::exp(-mu[0] * length), std::exp(-mu[1] * length), std::exp(-mu[2] * length)};
}

ScatterEvent ClassicTransport::scatter(const CorrelatedMedium& m, const OriginClass&, double, Rng&) const {
  return {m.albedo, m.phase};
}

// ---- connections --------------------------------------------------------------

Rgb shadow_transmittance(const Scene& scene, const TransportPolicy& policy, Vec3 p, const Vec3& dir, double distance,
                         int medium, int light) {
  Rgb tr(1.0);
  double remaining = distance;
  for (int guard = 0; guard < 256; ++guard) {
    const auto hit = scene.intersect({p, dir}, kEpsilon, remaining - kEpsilon, false);
    const double seg = hit ? hit->surface.t : remaining;
    if (medium >= 0) {
      // Each medium segment starts a fresh source-class flight.
      tr *= policy.transmittance(scene.media[static_cast<std::size_t>(medium)], OriginClass::source(light), dir, seg);
    }
    if (!hit) return tr;
    const Primitive& prim = scene.primitives[static_cast<std::size_t>(hit->primitive)];
    if (prim.material.kind != Material::Kind::None) return Rgb(0.0);
    p = p + dir * seg;
    remaining -= seg;
    medium = medium_after(scene, hit->primitive, hit->surface, p, dir, medium);
  }
  return Rgb(0.0);
}

std::optional<LightConnection> connect_light(const Scene& scene, const TransportPolicy& policy, const Vec3& p,
                                             int medium, int light, Rng& rng) {
  const Light& l = scene.lights[static_cast<std::size_t>(light)];
  Vec3 y;
  Rgb emitted;
  if (const auto* pt = std::get_if<PointLight>(&l.emitter)) {
    y = pt->position;
    emitted = pt->intensity;
  } else {
    const auto& area = std::get<AreaLight>(l.emitter);
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    y = area.rect.corner + area.rect.u * u1 + area.rect.v * u2;
    emitted = area.radiance;
  }
  const Vec3 d = y - p;
  const double dist2 = dot(d, d);
  if (!(dist2 > 0.0)) return std::nullopt;
  const double dist = std::sqrt(dist2);
  const Vec3 wi = d / dist;
  double geometry = 1.0 / dist2;
  if (const auto* area = std::get_if<AreaLight>(&l.emitter)) {
    const double cos_l = -dot(area->rect.normal(), wi);
    if (cos_l <= 0.0) return std::nullopt;
    geometry *= cos_l * area->rect.area();
  }
  const Rgb tr = shadow_transmittance(scene, policy, p, wi, dist, medium, light);
  if (tr.is_black()) return std::nullopt;
  return LightConnection{wi, emitted * tr * geometry};
}

Rgb next_event_medium(const Scene& scene, const TransportPolicy& policy, const Vec3& p, const Vec3& incoming,
                      const PhaseDescriptor& phase, int medium, Rng& rng) {
  if (scene.lights.empty()) return Rgb(0.0);
  const auto n = scene.lights.size();
  const int light = static_cast<int>(rng.uniform_index(n));
  const auto c = connect_light(scene, policy, p, medium, light, rng);
  if (!c) return Rgb(0.0);
  return c->radiance * (phase_eval(phase, incoming, c->direction) * static_cast<double>(n));
}

namespace {

Rgb next_event_surface(const Scene& scene, const TransportPolicy& policy, const Vec3& p, const Vec3& n_facing,
                       const Rgb& albedo, int medium, Rng& rng) {
  if (scene.lights.empty()) return Rgb(0.0);
  const auto n = scene.lights.size();
  const int light = static_cast<int>(rng.uniform_index(n));
  const auto c = connect_light(scene, policy, p, medium, light, rng);
  if (!c) return Rgb(0.0);
  const double cos_s = dot(n_facing, c->direction);
  if (cos_s <= 0.0) return Rgb(0.0);
  return c->radiance * albedo * (cos_s * std::numbers::inv_pi * static_cast<double>(n));
}

}  // namespace

// ---- path tracing -------------------------------------------------------------

Rgb trace_path(const Scene& scene, const TransportPolicy& policy, const Ray& camera_ray, Rng& rng, TraceStats* stats,
               PathObserver* observer) {
  Rgb L(0.0);
  PathState st;
  st.position = camera_ray.origin;
  st.direction = camera_ray.direction;
  st.medium = scene.medium_at(camera_ray.origin);
  st.origin = OriginClass::source();  // the camera acts as an uncorrelated source
  bool count_emission = true;
  auto reset = [&](PathEvent e, OriginClass next) {
    if (observer) observer->on_event(e, st);
    st.t_since_event = 0.0;
    st.origin = next;
  };

  for (int events = 0; events < kMaxEvents; ++events) {
    const Ray ray{st.position, st.direction};
    const auto hit = scene.intersect(ray, kEpsilon, std::numeric_limits<double>::infinity());
    const double t_surface = hit ? hit->surface.t : std::numeric_limits<double>::infinity();

    if (st.medium >= 0) {
      const CorrelatedMedium& med = scene.media[static_cast<std::size_t>(st.medium)];
      if (observer) observer->on_flight(st);
      const FlightEvent fe = policy.sample_flight(med, st.origin, st.direction, t_surface, rng);
      st.throughput *= fe.weight;
      if (!fe.reached_boundary) {
        st.position = ray.at(fe.t);
        st.t_since_event += fe.t;
        const ScatterEvent se = policy.scatter(med, st.origin, st.t_since_event, rng);
        st.throughput *= se.albedo;
        if (stats) ++stats->scatter_events;
        if (st.throughput.is_black()) {
          reset(PathEvent::Absorb, OriginClass::scattered());
          break;
        }
        L += st.throughput * next_event_medium(scene, policy, st.position, st.direction, se.phase, st.medium, rng);
        const PhaseSample ps = phase_sample(se.phase, st.direction, rng);
        reset(PathEvent::Scatter, OriginClass::scattered());
        st.direction = ps.direction;
        ++st.depth;
        count_emission = false;
        if (!roulette(st.throughput, st.depth, rng)) break;
        continue;
      }
      st.t_since_event += fe.t;
    }

    if (!hit) {
      if (st.medium < 0) L += st.throughput * scene.background;
      reset(PathEvent::Escape, OriginClass::source());
      break;
    }
    st.position = ray.at(hit->surface.t);

    if (hit->light >= 0) {
      const auto& area = std::get<AreaLight>(scene.lights[static_cast<std::size_t>(hit->light)].emitter);
      if (count_emission && hit->surface.front_face) L += st.throughput * area.radiance;
      reset(PathEvent::Absorb, OriginClass::source());
      break;
    }

    const Primitive& prim = scene.primitives[static_cast<std::size_t>(hit->primitive)];
    const Vec3 n_facing = hit->surface.front_face ? hit->surface.normal : -hit->surface.normal;
    switch (prim.material.kind) {
      case Material::Kind::None:
        // Vacuum to medium, medium to vacuum, or medium to medium (c12 = 0):
        // the boundary acts as a source, so t restarts.
        st.medium = medium_after(scene, hit->primitive, hit->surface, st.position, st.direction, st.medium);
        reset(PathEvent::Boundary, OriginClass::source());
        continue;
      case Material::Kind::Lambertian: {
        L += st.throughput *
             next_event_surface(scene, policy, st.position, n_facing, prim.material.albedo, st.medium, rng);
        st.throughput *= prim.material.albedo;
        reset(PathEvent::Surface, OriginClass::source());
        st.direction = cosine_hemisphere(n_facing, rng);
        count_emission = false;
        break;
      }
      case Material::Kind::Dielectric: {
        const double eta = hit->surface.front_face ? 1.0 / prim.material.ior : prim.material.ior;
        const double cos_i = -dot(st.direction, n_facing);
        const double sin2_t = eta * eta * std::max(0.0, 1.0 - cos_i * cos_i);
        const double u = rng.uniform();
        reset(PathEvent::Surface, OriginClass::source());
        if (sin2_t >= 1.0) {
          st.direction = normalize(st.direction + n_facing * (2.0 * cos_i));
        } else {
          const double cos_t = std::sqrt(1.0 - sin2_t);
          if (u < fresnel_dielectric(cos_i, cos_t, eta)) {
            st.direction = normalize(st.direction + n_facing * (2.0 * cos_i));
          } else {
            const Vec3 incoming = st.direction;
            st.direction = normalize(incoming * eta + n_facing * (eta * cos_i - cos_t));
            st.medium = medium_after(scene, hit->primitive, hit->surface, st.position, incoming, st.medium);
          }
        }
        count_emission = true;
        break;
      }
    }
    if (st.throughput.is_black()) break;
    ++st.depth;
    if (!roulette(st.throughput, st.depth, rng)) break;
  }

  if (stats) ++stats->paths;
  if (!L.is_finite()) {
    if (stats) ++stats->non_finite;
    return Rgb(0.0);
  }
  return L;
}

Rgb Image::mean() const {
  Rgb s(0.0);
  for (const auto& p : pixels) s += p;
  return pixels.empty() ? s : s / static_cast<double>(pixels.size());
}

Image render(const Scene& scene, const TransportPolicy& policy, const RenderOptions& options, TraceStats* stats,
             PathObserver* observer) {
  if (options.spp == 0) throw std::domain_error("spp must be at least 1");
  const Camera& cam = scene.camera;
  CropWindow crop = options.crop.value_or(CropWindow{0, 0, cam.width, cam.height});
  if (crop.width == 0 || crop.height == 0 || crop.x + crop.width > cam.width || crop.y + crop.height > cam.height) {
    throw std::domain_error("crop window must lie inside the image");
  }
  Image img(crop.width, crop.height);
  const std::size_t tiles_x = (crop.width + kTile - 1) / kTile;
  const std::size_t tiles_y = (crop.height + kTile - 1) / kTile;
  const auto grid = static_cast<std::size_t>(std::sqrt(static_cast<double>(options.spp)));
  const std::size_t strata = grid * grid;
  const double inv_grid = 1.0 / static_cast<double>(grid);

  std::atomic<std::uint64_t> paths{0};
  std::atomic<std::uint64_t> non_finite{0};
  std::atomic<std::uint64_t> scatters{0};
  const unsigned workers = observer ? 1u : resolve_workers(options.workers);
  parallel_for(tiles_x * tiles_y, workers, [&](std::size_t tile) {
    TraceStats local;
    const std::size_t x0 = (tile % tiles_x) * kTile;
    const std::size_t y0 = (tile / tiles_x) * kTile;
    for (std::size_t y = y0; y < std::min(y0 + kTile, crop.height); ++y) {
      for (std::size_t x = x0; x < std::min(x0 + kTile, crop.width); ++x) {
        const std::size_t fx = crop.x + x;
        const std::size_t fy = crop.y + y;
        Rng rng = Rng::stream(options.seed, fy * cam.width + fx);
        Rgb sum(0.0);
        for (std::size_t s = 0; s < options.spp; ++s) {
          double u = rng.uniform();
          double v = rng.uniform();
          if (s < strata) {
            u = (static_cast<double>(s % grid) + u) * inv_grid;
            v = (static_cast<double>(s / grid) + v) * inv_grid;
          }
          const Ray r = cam.generate_ray(static_cast<double>(fx) + u, static_cast<double>(fy) + v);
          sum += trace_path(scene, policy, r, rng, &local, observer);
        }
        img.at(x, y) = sum / static_cast<double>(options.spp);
      }
    }
    paths += local.paths;
    non_finite += local.non_finite;
    scatters += local.scatter_events;
  });
  if (stats) {
    stats->paths += paths;
    stats->non_finite += non_finite;
    stats->scatter_events += scatters;
  }
  return img;
}

}  // namespace corrtrans::render
