#pragma once

#include "corrtrans/rng.hpp"
#include "corrtrans/transmittance.hpp"
#include "corrtrans/vec.hpp"

namespace corrtrans::render {

// Directions are propagation directions: cos(theta) = dot(incoming, outgoing),
// so g > 0 means forward scattering.

struct PhaseSample {
  Vec3 direction;
  double pdf = 0.0;
};

/// Phase-function value; symmetric in its arguments.
double phase_eval(const PhaseDescriptor& phase, const Vec3& incoming, const Vec3& outgoing);

/// Importance sample of the phase function (pdf equals the value).
PhaseSample phase_sample(const PhaseDescriptor& phase, const Vec3& incoming, Rng& rng);

double henyey_greenstein(double cos_theta, double g);

/// Uniform direction on the sphere.
Vec3 uniform_sphere(double u1, double u2);

}  // namespace corrtrans::render
