#pragma once

// Free-flight distance samplers. Each sampler is a pure function of its
// uniform variate(s) and parameters; xi is taken from [0, 1).

#include <cstdint>
#include <limits>
#include <vector>

#include "corrtrans/rng.hpp"
#include "corrtrans/transmittance.hpp"

namespace corrtrans {

struct DistanceSample {
  double t = 0.0;
  /// Density of the sampler at t (set for collisions).
  double pdf = 0.0;
  bool reached_boundary = false;
  /// Probability of passing the boundary (set only when reached_boundary).
  double boundary_probability = 0.0;
  /// Monte Carlo weight of the event: p(t) / pdf for a collision,
  /// T(t_b) / boundary_probability for a boundary crossing.
  double weight = 1.0;
};

/// Density proportional to T(t) (requires alpha > 1). Throws std::domain_error
/// for alpha <= 1; use sample_gamma_general there.
DistanceSample sample_gamma_proportional(double xi, double alpha, double beta, double sigma);

/// Exact inversion of the gamma-concentration free-path distribution.
DistanceSample sample_gamma_general(double xi, double alpha, double beta, double sigma);

DistanceSample sample_exponential(double xi, double mu);
DistanceSample sample_linear(double xi, double mu);

struct GammaVariate {
  double value = 0.0;
  std::uint32_t proposals = 0;
};

/// Gamma(k, 1) variate by Marsaglia-Tsang squeeze/rejection; k < 1 uses the
/// U^(1/k) boost of a Gamma(k + 1) draw.
GammaVariate marsaglia_tsang(Rng& rng, double k);

/// Gamma(k, theta) free path; pdf is the gamma density.
DistanceSample sample_gamma_pathlength(Rng& rng, double k, double theta);

/// Probability mass of the proportional sampler beyond t_boundary:
/// (1 + sigma t / beta)^(1 - alpha). Throws for alpha <= 1.
double surface_hit_probability(double t_boundary, double alpha, double beta, double sigma);

// Analytic CDFs of the samplers above.
double gamma_proportional_cdf(double t, double alpha, double beta, double sigma);
double gamma_general_cdf(double t, double alpha, double beta, double sigma);
double exponential_cdf(double t, double mu);
double linear_cdf(double t, double mu);
double gamma_pathlength_cdf(double t, double k, double theta);

enum class FlightStrategy {
  /// Proportional sampling for gamma models with alpha > 1, analog otherwise.
  Default,
  /// Always sample the model's own free-path density p(t).
  Analog,
};

/// Distance sampler bound to one extinction model, used by the path tracer.
class FlightSampler {
public:
  enum class Method { Exponential, GammaProportional, GammaGeneral, Linear, GammaPathLength, Mixture };

  FlightSampler() : FlightSampler(ExtinctionModel{}) {}
  explicit FlightSampler(ExtinctionModel model, FlightStrategy strategy = FlightStrategy::Default);

  /// Samples a collision before t_boundary or reports the boundary crossing.
  DistanceSample sample(Rng& rng, double t_boundary = std::numeric_limits<double>::infinity()) const;

  /// Density of the sampler at t.
  double pdf(double t) const;
  /// Probability that a sample exceeds t.
  double survival(double t) const;

  Method method() const noexcept { return method_; }
  const ExtinctionModel& model() const noexcept { return model_; }

private:
  ExtinctionModel model_;
  Method method_ = Method::Exponential;
  std::vector<FlightSampler> components_;
  std::vector<double> cumulative_;
};

}  // namespace corrtrans
