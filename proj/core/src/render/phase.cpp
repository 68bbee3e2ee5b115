#include "corrtrans/render/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace corrtrans::render {

namespace {

constexpr double kInv4Pi = 0.25 * std::numbers::inv_pi;

// Below this |g| the HG inversion loses precision; the isotropic branch is exact there.
constexpr double kIsotropicG = 1e-4;

}  // namespace

double henyey_greenstein(double cos_theta, double g) {
  const double denom = 1.0 + g * g - 2.0 * g * cos_theta;
  return kInv4Pi * (1.0 - g * g) / (denom * std::sqrt(denom));
}

Vec3 uniform_sphere(double u1, double u2) {
  const double z = 1.0 - 2.0 * u1;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi), z};
}

double phase_eval(const PhaseDescriptor& phase, const Vec3& incoming, const Vec3& outgoing) {
  if (phase.kind == PhaseDescriptor::Kind::Isotropic) return kInv4Pi;
  return henyey_greenstein(dot(incoming, outgoing), phase.g);
}

PhaseSample phase_sample(const PhaseDescriptor& phase, const Vec3& incoming, Rng& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double g = phase.kind == PhaseDescriptor::Kind::HenyeyGreenstein ? phase.g : 0.0;
  if (std::abs(g) < kIsotropicG) {
    const Vec3 d = uniform_sphere(u1, u2);
    return {d, phase_eval(phase, incoming, d)};
  }
  const double s = (1.0 - g * g) / (1.0 - g + 2.0 * g * u1);
  const double cos_theta = std::clamp((1.0 + g * g - s * s) / (2.0 * g), -1.0, 1.0);
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const double phi = 2.0 * std::numbers::pi * u2;
  Vec3 t;
  Vec3 b;
  make_frame(incoming, t, b);
  const Vec3 d = normalize(incoming * cos_theta + t * (sin_theta * std::cos(phi)) + b * (sin_theta * std::sin(phi)));
  return {d, henyey_greenstein(cos_theta, g)};
}

}  // namespace corrtrans::render
